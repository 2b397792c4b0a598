#include "zkpark/algebra/msm.hpp"

#include "zkpark/kernels/msm.hpp"

namespace zkpark {

G1Point msm(std::span<const G1Point> points, std::span<const Fr> scalars) {
  return kernels::msm_dispatch(points, scalars).to_affine();
}

}  // namespace zkpark
