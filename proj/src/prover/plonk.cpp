#include "zkpark/prover/plonk.hpp"

#include <algorithm>

#include "zkpark/algebra/msm.hpp"
#include "zkpark/algebra/pairing.hpp"
#include "zkpark/kernels/parallel.hpp"
#include "zkpark/prover/transcript.hpp"
#include "zkpark/util/random.hpp"

namespace zkpark {

namespace {

constexpr std::size_t kQuotientBlowup = 4;

Fr coset_shift() { return fr_generator(); }

std::vector<Fr> powers_of(const Fr& base, std::size_t count) {
  std::vector<Fr> out(count);
  Fr acc = Fr::one();
  for (auto& x : out) {
    x = acc;
    acc *= base;
  }
  return out;
}

// Z_H on the quotient coset takes only kQuotientBlowup distinct values.
std::array<Fr, kQuotientBlowup> coset_vanishing(std::size_t n, const EvaluationDomain& big) {
  const Fr g_n = coset_shift().pow(static_cast<std::uint64_t>(n));
  const Fr step = big.omega().pow(static_cast<std::uint64_t>(n));
  std::array<Fr, kQuotientBlowup> out;
  Fr acc = Fr::one();
  for (auto& v : out) {
    v = g_n * acc - Fr::one();
    acc *= step;
  }
  return out;
}

void add_scaled(std::vector<Fr>& acc, std::span<const Fr> p, const Fr& k) {
  if (acc.size() < p.size()) acc.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) acc[i] += k * p[i];
}

void absorb_publics(Transcript& t, const VerifyingKey& vk, const PublicInputs& x) {
  t.absorb("vk", vk.digest());
  t.absorb("rh", x.rh);
  t.absorb("nu", x.nu);
  t.absorb("nf", x.nf);
}

void absorb_evals(Transcript& t, const Proof& p) {
  t.absorb("a_eval", p.a_eval);
  t.absorb("b_eval", p.b_eval);
  t.absorb("c_eval", p.c_eval);
  t.absorb("s1_eval", p.s1_eval);
  t.absorb("s2_eval", p.s2_eval);
  t.absorb("z_omega_eval", p.z_omega_eval);
}

// PI(zeta) with PI(omega^i) = -x_i.
Fr public_input_eval(const EvaluationDomain& d, const PublicInputs& x, const Fr& zeta) {
  const auto pub = x.as_array();
  Fr acc;
  for (std::size_t i = 0; i < pub.size(); ++i) acc -= pub[i] * d.lagrange_eval(i, zeta);
  return acc;
}

}  // namespace

Challenges derive_challenges(const VerifyingKey& vk, const PublicInputs& publics, const Proof& proof) {
  Transcript t(kPlonkProtocol);
  absorb_publics(t, vk, publics);
  Challenges ch;
  t.absorb("a", proof.a);
  t.absorb("b", proof.b);
  t.absorb("c", proof.c);
  ch.beta = t.challenge("beta");
  ch.gamma = t.challenge("gamma");
  t.absorb("z", proof.z);
  ch.alpha = t.challenge("alpha");
  t.absorb("t_lo", proof.t_lo);
  t.absorb("t_mid", proof.t_mid);
  t.absorb("t_hi", proof.t_hi);
  ch.zeta = t.challenge("zeta");
  absorb_evals(t, proof);
  ch.v = t.challenge("v");
  t.absorb("w_zeta", proof.w_zeta);
  t.absorb("w_zeta_omega", proof.w_zeta_omega);
  ch.u = t.challenge("u");
  return ch;
}

std::pair<ProvingKey, VerifyingKey> preprocess(const ConstraintSystem& cs, std::shared_ptr<const Srs> srs) {
  const std::size_t n = cs.n_gates();
  if (!srs || srs->max_degree() < n + 5) throw CapacityError("SRS too small for circuit of size " + std::to_string(n));
  const EvaluationDomain d(n);
  const EvaluationDomain big(kQuotientBlowup * n);
  const Fr shift = coset_shift();

  ProvingKey pk;
  pk.cs = cs;
  pk.srs = srs;
  pk.n = n;
  VerifyingKey& vk = pk.vk;
  vk.n = n;
  vk.num_public = static_cast<std::uint32_t>(cs.num_public());
  vk.g2_gen = srs->g2_gen;
  vk.g2_tau = srs->g2_tau;

  for (std::size_t s = 0; s < 5; ++s) {
    pk.selector_coeffs[s] = d.ifft(cs.selector(s));
    pk.selector_coset[s] = big.coset_fft(pk.selector_coeffs[s], shift);
    vk.selectors[s] = commit(*srs, pk.selector_coeffs[s]);
  }

  const std::vector<Fr> omegas = powers_of(d.omega(), n);
  const std::array<Fr, 3> ks = {Fr::one(), plonk_k1(), plonk_k2()};
  const auto& sigma = cs.copy_permutation();
  for (std::size_t col = 0; col < 3; ++col) {
    auto& ev = pk.sigma_evals[col];
    ev.resize(n);
    for (std::size_t row = 0; row < n; ++row) {
      const std::uint32_t target = sigma[col * n + row];
      ev[row] = ks[target / n] * omegas[target % n];
    }
    pk.sigma_coeffs[col] = d.ifft(ev);
    pk.sigma_coset[col] = big.coset_fft(pk.sigma_coeffs[col], shift);
    vk.sigmas[col] = commit(*srs, pk.sigma_coeffs[col]);
  }

  const std::size_t m = big.size();
  pk.coset_points = powers_of(big.omega(), m);
  for (auto& x : pk.coset_points) x *= shift;
  // L_0(x) = (x^n - 1) / (n (x - 1))
  const auto zh = coset_vanishing(n, big);
  std::vector<Fr> denom(m);
  const Fr n_fr = Fr::from_u64(n);
  for (std::size_t i = 0; i < m; ++i) denom[i] = n_fr * (pk.coset_points[i] - Fr::one());
  batch_inverse<Fr>(denom);
  pk.l0_coset.resize(m);
  for (std::size_t i = 0; i < m; ++i) pk.l0_coset[i] = zh[i % kQuotientBlowup] * denom[i];

  VerifyingKey out = vk;
  return {std::move(pk), std::move(out)};
}

Proof prove_with_blinding(const ProvingKey& pk, const PublicInputs& publics, const Witness& witness,
                          const std::array<Fr, kBlindingScalars>& blinding) {
  if (!check_satisfied(pk.cs, witness, publics)) throw UnsatisfiedWitness("witness does not satisfy the circuit");
  const std::size_t n = pk.n;
  const EvaluationDomain d(n);
  const EvaluationDomain big(kQuotientBlowup * n);
  const std::size_t m = big.size();
  const Fr shift = coset_shift();
  const Srs& srs = *pk.srs;
  const auto& b = blinding;

  Proof proof;
  Transcript t(kPlonkProtocol);
  absorb_publics(t, pk.vk, publics);

  // Round 1: blinded wire polynomials (b1 X + b2) Z_H + sum w_i L_i.
  std::array<std::vector<Fr>, 3> wires;
  for (std::size_t col = 0; col < 3; ++col) {
    std::vector<Fr> ev(n);
    for (std::size_t row = 0; row < n; ++row) ev[row] = witness.values[pk.cs.wire(static_cast<Column>(col), row)];
    auto coeffs = d.ifft(ev);
    coeffs.resize(n + 2);
    const Fr& hi = b[2 * col];
    const Fr& lo = b[2 * col + 1];
    coeffs[0] -= lo;
    coeffs[1] -= hi;
    coeffs[n] += lo;
    coeffs[n + 1] += hi;
    wires[col] = std::move(coeffs);
  }
  proof.a = commit(srs, wires[0]);
  proof.b = commit(srs, wires[1]);
  proof.c = commit(srs, wires[2]);
  t.absorb("a", proof.a);
  t.absorb("b", proof.b);
  t.absorb("c", proof.c);
  const Fr beta = t.challenge("beta");
  const Fr gamma = t.challenge("gamma");

  // Round 2: permutation accumulator.
  const Fr k1 = plonk_k1();
  const Fr k2 = plonk_k2();
  std::vector<Fr> num(n);
  std::vector<Fr> den(n);
  {
    Fr x = Fr::one();
    for (std::size_t i = 0; i < n; ++i) {
      const Fr& wa = witness.values[pk.cs.wire(Column::kA, i)];
      const Fr& wb = witness.values[pk.cs.wire(Column::kB, i)];
      const Fr& wc = witness.values[pk.cs.wire(Column::kC, i)];
      const Fr bx = beta * x;
      num[i] = (wa + bx + gamma) * (wb + k1 * bx + gamma) * (wc + k2 * bx + gamma);
      den[i] = (wa + beta * pk.sigma_evals[0][i] + gamma) * (wb + beta * pk.sigma_evals[1][i] + gamma) *
               (wc + beta * pk.sigma_evals[2][i] + gamma);
      x *= d.omega();
    }
  }
  batch_inverse<Fr>(den);
  std::vector<Fr> z_evals(n);
  z_evals[0] = Fr::one();
  for (std::size_t i = 0; i + 1 < n; ++i) z_evals[i + 1] = z_evals[i] * num[i] * den[i];
  auto z_coeffs = d.ifft(z_evals);
  z_coeffs.resize(n + 3);
  for (std::size_t j = 0; j < 3; ++j) {
    z_coeffs[j] -= b[6 + j];
    z_coeffs[n + j] += b[6 + j];
  }
  proof.z = commit(srs, z_coeffs);
  t.absorb("z", proof.z);
  const Fr alpha = t.challenge("alpha");

  // Round 3: quotient on the coset shift * H_4n.
  std::array<std::vector<Fr>, 3> w4;
  for (std::size_t col = 0; col < 3; ++col) w4[col] = big.coset_fft(wires[col], shift);
  const std::vector<Fr> z4 = big.coset_fft(z_coeffs, shift);
  std::vector<Fr> pi_evals(n);
  {
    const auto pub = publics.as_array();
    for (std::size_t i = 0; i < pub.size(); ++i) pi_evals[i] = -pub[i];
  }
  const std::vector<Fr> pi4 = big.coset_fft(d.ifft(pi_evals), shift);
  auto zh_inv = coset_vanishing(n, big);
  batch_inverse<Fr>(zh_inv);
  const Fr alpha2 = alpha.square();
  std::vector<Fr> t4(m);
  const auto& q = pk.selector_coset;
  const auto& s = pk.sigma_coset;
#pragma omp parallel for schedule(static) if (kernels::use_parallel(m))
  for (std::size_t i = 0; i < m; ++i) {
    const Fr& av = w4[0][i];
    const Fr& bv = w4[1][i];
    const Fr& cv = w4[2][i];
    const Fr gate = q[3][i] * av * bv + q[0][i] * av + q[1][i] * bv + q[2][i] * cv + q[4][i] + pi4[i];
    const Fr bx = beta * pk.coset_points[i];
    const Fr lhs = (av + bx + gamma) * (bv + k1 * bx + gamma) * (cv + k2 * bx + gamma) * z4[i];
    const Fr rhs = (av + beta * s[0][i] + gamma) * (bv + beta * s[1][i] + gamma) * (cv + beta * s[2][i] + gamma) *
                   z4[(i + kQuotientBlowup) % m];
    const Fr boundary = (z4[i] - Fr::one()) * pk.l0_coset[i];
    t4[i] = (gate + alpha * (lhs - rhs) + alpha2 * boundary) * zh_inv[i % kQuotientBlowup];
  }
  const std::vector<Fr> t_coeffs = big.coset_ifft(t4, shift);
  for (std::size_t i = 3 * n + 6; i < m; ++i) {
    if (!t_coeffs[i].is_zero()) throw UnsatisfiedWitness("quotient is not a polynomial");
  }
  const std::span<const Fr> t_all(t_coeffs);
  const auto t_lo = t_all.subspan(0, n);
  const auto t_mid = t_all.subspan(n, n);
  const auto t_hi = t_all.subspan(2 * n, n + 6);
  proof.t_lo = commit(srs, t_lo);
  proof.t_mid = commit(srs, t_mid);
  proof.t_hi = commit(srs, t_hi);
  t.absorb("t_lo", proof.t_lo);
  t.absorb("t_mid", proof.t_mid);
  t.absorb("t_hi", proof.t_hi);
  const Fr zeta = t.challenge("zeta");

  // Round 4: openings.
  const Fr zeta_omega = zeta * d.omega();
  proof.a_eval = evaluate_coeffs(wires[0], zeta);
  proof.b_eval = evaluate_coeffs(wires[1], zeta);
  proof.c_eval = evaluate_coeffs(wires[2], zeta);
  proof.s1_eval = evaluate_coeffs(pk.sigma_coeffs[0], zeta);
  proof.s2_eval = evaluate_coeffs(pk.sigma_coeffs[1], zeta);
  proof.z_omega_eval = evaluate_coeffs(z_coeffs, zeta_omega);
  absorb_evals(t, proof);
  const Fr v = t.challenge("v");

  // Round 5: linearisation r(X) with r(zeta) = 0, then the two opening quotients.
  const Fr& ae = proof.a_eval;
  const Fr& be = proof.b_eval;
  const Fr& ce = proof.c_eval;
  const Fr zeta_n = zeta.pow(static_cast<std::uint64_t>(n));
  const Fr zh_zeta = zeta_n - Fr::one();
  const Fr l0_zeta = d.lagrange_eval(0, zeta);
  const Fr perm_a = (ae + beta * zeta + gamma) * (be + beta * k1 * zeta + gamma) * (ce + beta * k2 * zeta + gamma);
  const Fr perm_b = (ae + beta * proof.s1_eval + gamma) * (be + beta * proof.s2_eval + gamma);

  std::vector<Fr> r;
  add_scaled(r, pk.selector_coeffs[3], ae * be);
  add_scaled(r, pk.selector_coeffs[0], ae);
  add_scaled(r, pk.selector_coeffs[1], be);
  add_scaled(r, pk.selector_coeffs[2], ce);
  add_scaled(r, pk.selector_coeffs[4], Fr::one());
  add_scaled(r, z_coeffs, alpha * perm_a + alpha2 * l0_zeta);
  add_scaled(r, pk.sigma_coeffs[2], -(alpha * perm_b * beta * proof.z_omega_eval));
  add_scaled(r, t_lo, -zh_zeta);
  add_scaled(r, t_mid, -(zh_zeta * zeta_n));
  add_scaled(r, t_hi, -(zh_zeta * zeta_n * zeta_n));
  r[0] += public_input_eval(d, publics, zeta) - alpha2 * l0_zeta - alpha * perm_b * (ce + gamma) * proof.z_omega_eval;

  std::vector<Fr> w = r;
  Fr vp = v;
  const std::pair<const std::vector<Fr>*, const Fr*> opened[5] = {{&wires[0], &proof.a_eval},
                                                                  {&wires[1], &proof.b_eval},
                                                                  {&wires[2], &proof.c_eval},
                                                                  {&pk.sigma_coeffs[0], &proof.s1_eval},
                                                                  {&pk.sigma_coeffs[1], &proof.s2_eval}};
  for (const auto& [poly, eval] : opened) {
    add_scaled(w, *poly, vp);
    w[0] -= vp * *eval;
    vp *= v;
  }
  if (!divide_by_linear_in_place(w, zeta).is_zero()) throw UnsatisfiedWitness("opening at zeta has a remainder");
  std::vector<Fr> w_omega = z_coeffs;
  w_omega[0] -= proof.z_omega_eval;
  divide_by_linear_in_place(w_omega, zeta_omega);
  proof.w_zeta = commit(srs, w);
  proof.w_zeta_omega = commit(srs, w_omega);
  return proof;
}

Proof prove(const ProvingKey& pk, const PublicInputs& publics, const Witness& witness) {
  SystemRandom rng;
  return prove(pk, publics, witness, rng);
}

bool verify(const VerifyingKey& vk, const PublicInputs& publics, const Proof& proof) {
  if (vk.num_public != kNumPublicInputs) return false;
  const EvaluationDomain d(vk.n);
  const Challenges ch = derive_challenges(vk, publics, proof);
  const Fr& zeta = ch.zeta;
  const Fr zeta_n = zeta.pow(vk.n);
  const Fr zh_zeta = zeta_n - Fr::one();
  if (zh_zeta.is_zero()) return false;

  const Fr& ae = proof.a_eval;
  const Fr& be = proof.b_eval;
  const Fr& ce = proof.c_eval;
  const Fr k1 = plonk_k1();
  const Fr k2 = plonk_k2();
  const Fr l0_zeta = d.lagrange_eval(0, zeta);
  const Fr pi_zeta = public_input_eval(d, publics, zeta);
  const Fr alpha2 = ch.alpha.square();
  const Fr perm_a = (ae + ch.beta * zeta + ch.gamma) * (be + ch.beta * k1 * zeta + ch.gamma) *
                    (ce + ch.beta * k2 * zeta + ch.gamma);
  const Fr perm_b = (ae + ch.beta * proof.s1_eval + ch.gamma) * (be + ch.beta * proof.s2_eval + ch.gamma);
  const Fr r0 = pi_zeta - alpha2 * l0_zeta - ch.alpha * perm_b * (ce + ch.gamma) * proof.z_omega_eval;

  const Fr v2 = ch.v.square();
  const Fr v3 = v2 * ch.v;
  const Fr v4 = v3 * ch.v;
  const Fr v5 = v4 * ch.v;
  const Fr e = -r0 + ch.v * ae + v2 * be + v3 * ce + v4 * proof.s1_eval + v5 * proof.s2_eval + ch.u * proof.z_omega_eval;
  const Fr zeta_omega = zeta * d.omega();

  // zeta [W] + u zeta omega [W'] + [F] - [E]
  const std::vector<G1Affine> points = {
      vk.selectors[3], vk.selectors[0], vk.selectors[1], vk.selectors[2], vk.selectors[4], proof.z, vk.sigmas[2],
      proof.t_lo,      proof.t_mid,     proof.t_hi,      proof.a,         proof.b,         proof.c, vk.sigmas[0],
      vk.sigmas[1],    g1_generator(),  proof.w_zeta,    proof.w_zeta_omega};
  const std::vector<Fr> scalars = {ae * be,
                                   ae,
                                   be,
                                   ce,
                                   Fr::one(),
                                   perm_a * ch.alpha + l0_zeta * alpha2 + ch.u,
                                   -(perm_b * ch.alpha * ch.beta * proof.z_omega_eval),
                                   -zh_zeta,
                                   -(zh_zeta * zeta_n),
                                   -(zh_zeta * zeta_n * zeta_n),
                                   ch.v,
                                   v2,
                                   v3,
                                   v4,
                                   v5,
                                   -e,
                                   zeta,
                                   ch.u * zeta_omega};
  const G1Affine right = msm(points, scalars);
  const G1Affine left = (G1Jacobian(proof.w_zeta) + G1Jacobian(proof.w_zeta_omega) * ch.u).to_affine();
  const std::pair<G1Affine, G2Affine> terms[2] = {{left, vk.g2_tau}, {-right, vk.g2_gen}};
  return pairing_check(terms);
}

bool verify(const VerifyingKey& vk, const PublicInputs& publics, std::span<const std::uint8_t> proof_bytes) {
  return verify(vk, publics, Proof::deserialize(proof_bytes));
}

}  // namespace zkpark
