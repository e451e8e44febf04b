#pragma once

#include <memory>
#include <vector>

#include "cnsdecay/grid.hpp"
#include "cnsdecay/params.hpp"
#include "cnsdecay/state.hpp"
#include "cnsdecay/symbol.hpp"

namespace cnsdecay {

/// A function of the symbol restricted to one shell |n|^2 = const: the
/// acoustic 2x2 block (real form, see Block2) and the scalar applied to the
/// solenoidal momentum.
struct ShellOperator {
  Block2 acoustic;
  double solenoidal = 1.0;
};

/// f(B(xi)) tabulated per integer shell of a grid. Because the symbol depends
/// on xi only through |xi| and the direction xi/|xi|, one entry per shell
/// suffices.
class ShellTable {
 public:
  ShellTable() = default;
  ShellTable(const SpectralGrid& grid, std::vector<ShellOperator> entries);

  const ShellOperator& operator[](int shell) const { return entries_[static_cast<std::size_t>(shell)]; }
  std::size_t size() const noexcept { return entries_.size(); }

  /// out += scale * f(B) in, mode by mode. The variable v is either momentum or
  /// velocity; both carry the same linear operator.
  void apply_add(const SpectralField& rho_in, const SpectralVector& v_in, double scale,
                 SpectralField& rho_out, SpectralVector& v_out) const;
  /// out = f(B) in.
  void apply(const SpectralField& rho_in, const SpectralVector& v_in, SpectralField& rho_out,
             SpectralVector& v_out) const;

 private:
  std::shared_ptr<const SpectralGrid> grid_;
  std::vector<ShellOperator> entries_;
  std::vector<double> inv_k_;
};

/// e^{tB} on every shell of the grid; the zero shell is the identity.
ShellTable semigroup_table(const SpectralGrid& grid, const FluidParams& params, double t);

/// phi_0(hB), phi_1(hB), phi_2(hB) on every shell; the zero shell carries 1/j!.
struct PhiTables {
  double h = 0.0;
  ShellTable phi0, phi1, phi2;
};
PhiTables phi_tables(const SpectralGrid& grid, const FluidParams& params, double h);

/// K(t) state0: each mode multiplied by e^{tB(xi)}, zero mode unchanged,
/// output time = state0.time() + t. Throws DomainError for t < 0.
PerturbationState apply_semigroup_grid(const PerturbationState& state0, const FluidParams& params,
                                       double t);

}  // namespace cnsdecay
