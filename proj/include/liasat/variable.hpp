// Variables and the total strict order over them.
#pragma once

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <string>
#include <vector>

namespace liasat {

using VarId = int;

enum class VarKind { original, slack, fresh };

struct VarInfo {
  std::string name;
  VarKind kind = VarKind::original;
};

class VariablePool {
 public:
  VarId create(std::string name, VarKind kind = VarKind::original) {
    infos_.push_back({std::move(name), kind});
    return static_cast<VarId>(infos_.size()) - 1;
  }
  VarInfo const& info(VarId v) const { return infos_.at(static_cast<size_t>(v)); }
  std::string const& name(VarId v) const { return info(v).name; }
  VarKind kind(VarId v) const { return info(v).kind; }
  int size() const { return static_cast<int>(infos_.size()); }

 private:
  std::vector<VarInfo> infos_;
};

/// Total strict order over the solver's variables. Every guarded variable
/// precedes every unguarded one; the relative order of existing variables
/// never changes. Fresh variables enter as the global minimum (they are
/// guarded by construction), the slack variable as the smallest unguarded
/// variable.
class VariableOrder {
 public:
  VariableOrder() = default;

  /// Builds from the ascending list; the first guarded_count entries form
  /// the guarded block.
  VariableOrder(std::vector<VarId> ascending, size_t guarded_count)
      : ascending_(std::move(ascending)), guarded_count_(guarded_count) {
    if (guarded_count_ > ascending_.size())
      throw std::domain_error("VariableOrder: guarded block larger than order");
    rebuild_ranks();
  }

  bool contains(VarId v) const {
    return v >= 0 && static_cast<size_t>(v) < rank_.size() && rank_[static_cast<size_t>(v)] >= 0;
  }

  int rank(VarId v) const {
    if (!contains(v)) throw std::domain_error("VariableOrder: unranked variable");
    return rank_[static_cast<size_t>(v)];
  }

  bool precedes(VarId a, VarId b) const { return rank(a) < rank(b); }

  std::vector<VarId> const& ascending() const { return ascending_; }
  size_t guarded_count() const { return guarded_count_; }

  /// Fresh k variables become the new global minimum and extend the
  /// guarded block.
  void insert_global_minimum(VarId v) {
    ascending_.insert(ascending_.begin(), v);
    ++guarded_count_;
    rebuild_ranks();
  }

  /// The slack variable is the smallest unguarded variable.
  void insert_smallest_unguarded(VarId v) {
    ascending_.insert(ascending_.begin() + static_cast<std::ptrdiff_t>(guarded_count_), v);
    rebuild_ranks();
  }

 private:
  void rebuild_ranks() {
    VarId max_id = -1;
    for (VarId v : ascending_) max_id = std::max(max_id, v);
    rank_.assign(static_cast<size_t>(max_id) + 1, -1);
    for (size_t i = 0; i < ascending_.size(); ++i) {
      VarId v = ascending_[i];
      if (v < 0 || rank_[static_cast<size_t>(v)] >= 0)
        throw std::domain_error("VariableOrder: duplicate or invalid variable");
      rank_[static_cast<size_t>(v)] = static_cast<int>(i);
    }
  }

  std::vector<VarId> ascending_;
  size_t guarded_count_ = 0;
  std::vector<int> rank_;
};

}  // namespace liasat
