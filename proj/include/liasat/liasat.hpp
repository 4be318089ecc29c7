#pragma once

#include "liasat/arith.hpp"
#include "liasat/bound_stack.hpp"
#include "liasat/bounds.hpp"
#include "liasat/constraint.hpp"
#include "liasat/cooper.hpp"
#include "liasat/corpus.hpp"
#include "liasat/engine.hpp"
#include "liasat/oracle.hpp"
#include "liasat/parser.hpp"
#include "liasat/polynomial.hpp"
#include "liasat/problem.hpp"
#include "liasat/render.hpp"
#include "liasat/tighten.hpp"
#include "liasat/variable.hpp"
