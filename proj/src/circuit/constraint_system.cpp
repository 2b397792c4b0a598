#include "zkpark/circuit/constraint_system.hpp"

#include <bit>
#include <sstream>

#include "zkpark/util/bytes.hpp"

namespace zkpark {

ConstraintSystem::ConstraintSystem(unsigned depth, std::vector<Gate> gates, std::size_t num_vars,
                                   std::size_t num_public, Var pad_var)
    : depth_(depth), gates_(std::move(gates)), num_vars_(num_vars), num_public_(num_public) {
  used_gates_ = gates_.size();
  if (num_public_ > used_gates_) throw ArgumentError("more public inputs than gates");
  if (pad_var >= num_vars_) throw ArgumentError("pad variable out of range");
  const std::size_t n = std::max<std::size_t>(8, std::bit_ceil(used_gates_));
  Gate pad;
  pad.a = pad.b = pad.c = pad_var;
  gates_.resize(n, pad);

  const std::size_t slots = 3 * n;
  sigma_.resize(slots);
  std::vector<std::int64_t> first(num_vars_, -1);
  std::vector<std::int64_t> last(num_vars_, -1);
  for (std::size_t s = 0; s < slots; ++s) {
    const Var v = wire(static_cast<Column>(s / n), s % n);
    if (v >= num_vars_) throw ArgumentError("gate references unknown variable");
    if (first[v] < 0) {
      first[v] = static_cast<std::int64_t>(s);
    } else {
      sigma_[static_cast<std::size_t>(last[v])] = static_cast<std::uint32_t>(s);
    }
    last[v] = static_cast<std::int64_t>(s);
  }
  for (std::size_t v = 0; v < num_vars_; ++v) {
    if (first[v] < 0) throw ArgumentError("variable " + std::to_string(v) + " appears in no gate");
    sigma_[static_cast<std::size_t>(last[v])] = static_cast<std::uint32_t>(first[v]);
  }
}

Var ConstraintSystem::wire(Column col, std::size_t row) const {
  const Gate& g = gates_[row];
  switch (col) {
    case Column::kA:
      return g.a;
    case Column::kB:
      return g.b;
    default:
      return g.c;
  }
}

std::vector<Fr> ConstraintSystem::selector(std::size_t which) const {
  std::vector<Fr> out(gates_.size());
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    const Gate& g = gates_[i];
    const Fr* sel[5] = {&g.q_l, &g.q_r, &g.q_o, &g.q_m, &g.q_c};
    out[i] = *sel[which];
  }
  return out;
}

std::string ConstraintSystem::dump() const {
  std::ostringstream os;
  os << "depth " << depth_ << " n " << gates_.size() << " used " << used_gates_ << " vars " << num_vars_ << " public "
     << num_public_ << '\n';
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    const Gate& g = gates_[i];
    os << "gate " << i;
    for (const Fr* s : {&g.q_l, &g.q_r, &g.q_o, &g.q_m, &g.q_c}) os << ' ' << to_hex(s->to_bytes());
    os << ' ' << g.a << ' ' << g.b << ' ' << g.c << '\n';
  }
  return os.str();
}

bool check_satisfied(const ConstraintSystem& cs, const Witness& witness, const PublicInputs& publics) {
  if (witness.values.size() != cs.num_vars()) return false;
  const auto& w = witness.values;
  const auto pub = publics.as_array();
  const std::size_t n = cs.n_gates();
  for (std::size_t i = 0; i < n; ++i) {
    const Gate& g = cs.gates()[i];
    const Fr& a = w[g.a];
    const Fr& b = w[g.b];
    const Fr& c = w[g.c];
    Fr acc = g.q_l * a + g.q_r * b + g.q_o * c + g.q_m * a * b + g.q_c;
    if (i < cs.num_public()) acc -= pub[i];
    if (!acc.is_zero()) return false;
  }
  // Copy cycles: every slot must agree with the slot sigma sends it to.
  const auto& sigma = cs.copy_permutation();
  auto slot_value = [&](std::size_t s) -> const Fr& { return w[cs.wire(static_cast<Column>(s / n), s % n)]; };
  for (std::size_t s = 0; s < sigma.size(); ++s) {
    if (slot_value(s) != slot_value(sigma[s])) return false;
  }
  return true;
}

}  // namespace zkpark
