#include "slicer.hpp"

#include <algorithm>

namespace ibmc {

void Slicer::keep_closure(const UnwindingSession& sess, int eq_id,
                          std::vector<int>& out) {
  std::vector<int> work{eq_id};
  while (!work.empty()) {
    int id = work.back();
    work.pop_back();
    if (kept_.count(id)) continue;
    kept_.insert(id);
    out.push_back(id);
    const GuardedEquation& eq = sess.equations()[size_t(id)];
    for (const SsaName& r : eq.reads) {
      auto it = def_of_.find(r.key());
      if (it != def_of_.end() && !kept_.count(it->second))
        work.push_back(it->second);
    }
  }
}

std::vector<int> Slicer::slice_increment(
    const UnwindingSession& sess, const std::vector<int>& new_eq_ids,
    const std::vector<PropertyAtom>& new_atoms) {
  const auto& eqs = sess.equations();
  for (int id : new_eq_ids) {
    const GuardedEquation& eq = eqs[size_t(id)];
    if (eq.lhs.valid()) def_of_[eq.lhs.key()] = id;
    if (eq.kind == EqKind::Assume) assume_eqs_.push_back(id);
    ++seen_;
  }

  std::vector<int> out;
  if (!enabled_) {
    for (int id : new_eq_ids) {
      kept_.insert(id);
      out.push_back(id);
    }
    return out;
  }

  if (!new_atoms.empty()) atoms_seen_ = true;
  if (atoms_seen_) {
    // Path constraints must stay with the formula; late-arriving atoms
    // resurrect older assumes as well.
    for (int id : assume_eqs_)
      if (!kept_.count(id)) keep_closure(sess, id, out);
  }
  for (const PropertyAtom& a : new_atoms) keep_closure(sess, a.eq_id, out);

  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ibmc
