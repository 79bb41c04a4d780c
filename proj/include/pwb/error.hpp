#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pwb {

enum class errc {
  no_sign_change,
  max_iterations,
  singular_jacobian,
  domain_error,
  pole_proximity,
  negative_radicand,
  unpoled,
  arcsine_domain,
  no_root_in_window,
  multiple_roots,
  insufficient_data,
  diverged_fit,
  evanescent_transverse,
  degenerate_grid,
  degenerate_fit,
  grid_too_coarse,
  zero_dispersion,
  no_guided_modes,
  bessel_range,
  no_real_solution,
  boundary_residual,
  zero_mean,
  zero_variance,
  validation,
  parse_error,
  io_error,
};

constexpr std::string_view to_string(errc e) {
  switch (e) {
    case errc::no_sign_change: return "NoSignChange";
    case errc::max_iterations: return "MaxIterations";
    case errc::singular_jacobian: return "SingularJacobian";
    case errc::domain_error: return "DomainError";
    case errc::pole_proximity: return "PoleProximity";
    case errc::negative_radicand: return "NegativeRadicand";
    case errc::unpoled: return "Unpoled";
    case errc::arcsine_domain: return "ArcsineDomain";
    case errc::no_root_in_window: return "NoRootInWindow";
    case errc::multiple_roots: return "MultipleRoots";
    case errc::insufficient_data: return "InsufficientData";
    case errc::diverged_fit: return "DivergedFit";
    case errc::evanescent_transverse: return "EvanescentTransverse";
    case errc::degenerate_grid: return "DegenerateGrid";
    case errc::degenerate_fit: return "DegenerateFit";
    case errc::grid_too_coarse: return "GridTooCoarse";
    case errc::zero_dispersion: return "ZeroDispersion";
    case errc::no_guided_modes: return "NoGuidedModes";
    case errc::bessel_range: return "BesselRange";
    case errc::no_real_solution: return "NoRealSolution";
    case errc::boundary_residual: return "BoundaryResidual";
    case errc::zero_mean: return "ZeroMean";
    case errc::zero_variance: return "ZeroVariance";
    case errc::validation: return "Validation";
    case errc::parse_error: return "ParseError";
    case errc::io_error: return "IoError";
  }
  return "Unknown";
}

class error : public std::runtime_error {
public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

}  // namespace pwb
