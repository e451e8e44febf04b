#include "cnsdecay/semigroup.hpp"

#include <cmath>

#include "cnsdecay/errors.hpp"

namespace cnsdecay {

ShellTable::ShellTable(const SpectralGrid& grid, std::vector<ShellOperator> entries)
    : grid_(std::make_shared<const SpectralGrid>(grid)), entries_(std::move(entries)) {
  if (entries_.size() != static_cast<std::size_t>(grid.max_shell() + 1))
    throw DimensionError("shell table size does not match grid");
  inv_k_.resize(entries_.size());
  inv_k_[0] = 0.0;
  for (std::size_t s = 1; s < entries_.size(); ++s)
    inv_k_[s] = 1.0 / (grid.fundamental() * std::sqrt(static_cast<double>(s)));
}

void ShellTable::apply_add(const SpectralField& rho_in, const SpectralVector& v_in, double scale,
                           SpectralField& rho_out, SpectralVector& v_out) const {
  const SpectralGrid& g = *grid_;
  const std::size_t n = g.spectral_size();
  const Complex i_unit{0.0, 1.0};
  for (std::size_t idx = 0; idx < n; ++idx) {
    const int s = g.shell(idx);
    const ShellOperator& op = entries_[static_cast<std::size_t>(s)];
    const Complex r = rho_in[idx];
    const Complex v0 = v_in[0][idx], v1 = v_in[1][idx], v2 = v_in[2][idx];
    if (s == 0) {
      rho_out[idx] += scale * op.acoustic.f11 * r;
      v_out[0][idx] += scale * op.solenoidal * v0;
      v_out[1][idx] += scale * op.solenoidal * v1;
      v_out[2][idx] += scale * op.solenoidal * v2;
      continue;
    }
    const auto k = g.wavevector(idx);
    const double ik = inv_k_[static_cast<std::size_t>(s)];
    const double e0 = k[0] * ik, e1 = k[1] * ik, e2 = k[2] * ik;
    const Complex par = e0 * v0 + e1 * v1 + e2 * v2;
    const Block2& a = op.acoustic;
    const Complex r_new = a.f11 * r - i_unit * a.f12 * par;
    const Complex par_new = i_unit * a.f21 * r + a.f22 * par;
    const double sol = op.solenoidal;
    // v' = sol * (v - e par) + e par'
    const Complex shift = par_new - sol * par;
    rho_out[idx] += scale * r_new;
    v_out[0][idx] += scale * (sol * v0 + e0 * shift);
    v_out[1][idx] += scale * (sol * v1 + e1 * shift);
    v_out[2][idx] += scale * (sol * v2 + e2 * shift);
  }
}

void ShellTable::apply(const SpectralField& rho_in, const SpectralVector& v_in, SpectralField& rho_out,
                       SpectralVector& v_out) const {
  const std::size_t n = grid_->spectral_size();
  rho_out.assign(n, Complex{});
  for (auto& c : v_out) c.assign(n, Complex{});
  apply_add(rho_in, v_in, 1.0, rho_out, v_out);
}

ShellTable semigroup_table(const SpectralGrid& grid, const FluidParams& params, double t) {
  if (t < 0.0) throw DomainError("semigroup time must be nonnegative");
  std::vector<ShellOperator> entries(static_cast<std::size_t>(grid.max_shell() + 1));
  for (std::size_t s = 1; s < entries.size(); ++s) {
    const double k = grid.fundamental() * std::sqrt(static_cast<double>(s));
    entries[s].acoustic = acoustic_exp(k, params, t);
    entries[s].solenoidal = std::exp(-params.mu * k * k * t);
  }
  return ShellTable(grid, std::move(entries));
}

PhiTables phi_tables(const SpectralGrid& grid, const FluidParams& params, double h) {
  if (!(h > 0.0)) throw DomainError("step size must be positive");
  const std::size_t count = static_cast<std::size_t>(grid.max_shell() + 1);
  std::vector<ShellOperator> p0(count), p1(count), p2(count);
  p1[0] = {Block2{}, 1.0};
  p2[0] = {Block2{0.5, 0.0, 0.0, 0.5}, 0.5};
  for (std::size_t s = 1; s < count; ++s) {
    const double k = grid.fundamental() * std::sqrt(static_cast<double>(s));
    const auto blocks = acoustic_phi_functions(k, params, h);
    const double z = -params.mu * k * k * h;
    // The exponential itself comes from the closed form, which is exact for
    // every step size; the augmented matrix supplies phi_1 and phi_2.
    p0[s] = {acoustic_exp(k, params, h), std::exp(z)};
    p1[s] = {blocks[1], phi_scalar(z, 1)};
    p2[s] = {blocks[2], phi_scalar(z, 2)};
  }
  PhiTables out;
  out.h = h;
  out.phi0 = ShellTable(grid, std::move(p0));
  out.phi1 = ShellTable(grid, std::move(p1));
  out.phi2 = ShellTable(grid, std::move(p2));
  return out;
}

PerturbationState apply_semigroup_grid(const PerturbationState& state0, const FluidParams& params,
                                       double t) {
  if (t < 0.0) throw DomainError("semigroup time must be nonnegative");
  if (t == 0.0) return state0;
  const SpectralGrid& grid = state0.grid();
  const ShellTable table = semigroup_table(grid, params, t);
  SpectralField rho;
  SpectralVector m;
  table.apply(state0.rho_hat(), state0.m_hat(), rho, m);
  // Zero mode of rho is copied, not multiplied, so the mass is bit-identical.
  rho[0] = state0.rho_hat()[0];
  return PerturbationState(grid, std::move(rho), std::move(m), state0.time() + t);
}

}  // namespace cnsdecay
