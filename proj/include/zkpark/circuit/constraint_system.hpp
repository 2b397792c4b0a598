#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "zkpark/algebra/fields.hpp"

namespace zkpark {

using Var = std::uint32_t;

enum class Column : std::uint8_t { kA = 0, kB = 1, kC = 2 };

// q_L*a + q_R*b + q_O*c + q_M*a*b + q_C (+ PI on public rows) = 0
struct Gate {
  Fr q_l, q_r, q_o, q_m, q_c;
  Var a = 0, b = 0, c = 0;

  bool operator==(const Gate&) const = default;
};

struct PublicInputs {
  Fr rh;
  Fr nu;
  Fr nf;

  std::array<Fr, 3> as_array() const { return {rh, nu, nf}; }
  bool operator==(const PublicInputs&) const = default;
};

inline constexpr std::size_t kNumPublicInputs = 3;

struct Witness {
  std::vector<Fr> values;  // one per variable
};

class ConstraintSystem {
 public:
  ConstraintSystem() = default;
  // Pads the gate list to a power of two (minimum 8) with all-zero gates
  // wired to pad_var. Public inputs occupy rows 0..k-1 as q_L = 1 gates.
  ConstraintSystem(unsigned depth, std::vector<Gate> gates, std::size_t num_vars, std::size_t num_public, Var pad_var);

  unsigned depth() const { return depth_; }
  std::size_t n_gates() const { return gates_.size(); }
  std::size_t used_gates() const { return used_gates_; }
  std::size_t num_vars() const { return num_vars_; }
  std::size_t num_public() const { return num_public_; }
  const std::vector<Gate>& gates() const { return gates_; }

  Var wire(Column col, std::size_t row) const;
  // Slot id = col * n + row. sigma maps each slot to the next slot holding the
  // same variable, closing one cycle per variable.
  const std::vector<std::uint32_t>& copy_permutation() const { return sigma_; }

  std::vector<Fr> selector(std::size_t which) const;  // 0..4 = q_L, q_R, q_O, q_M, q_C

  // "gate <i> <q_L> <q_R> <q_O> <q_M> <q_C> <a> <b> <c>" with 32-byte LE hex selectors.
  std::string dump() const;

  bool operator==(const ConstraintSystem& o) const {
    return depth_ == o.depth_ && num_vars_ == o.num_vars_ && num_public_ == o.num_public_ && gates_ == o.gates_;
  }

 private:
  unsigned depth_ = 0;
  std::vector<Gate> gates_;
  std::size_t used_gates_ = 0;
  std::size_t num_vars_ = 0;
  std::size_t num_public_ = 0;
  std::vector<std::uint32_t> sigma_;
};

// Gate equations, copy cycles, and public rows, evaluated directly.
bool check_satisfied(const ConstraintSystem& cs, const Witness& witness, const PublicInputs& publics);

}  // namespace zkpark
