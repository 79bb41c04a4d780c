#include <cstdio>

#include "pwb/fiber_prop.hpp"
#include "pwb/materials.hpp"

// Spectral correlation of a type-II PPKTP source as the pump pulse lengthens.
int main() {
  using namespace pwb;
  const auto crystal = materials::ppktp_type2();
  biphoton_config cfg;
  cfg.pol_pump = polarization::y;
  cfg.pol_signal = polarization::y;
  cfg.pol_idler = polarization::z;
  cfg.qpm_sign = 1;
  const double wp = wavelength_um_to_omega(0.7801);
  const double ws = classical_signal_omega(wp, crystal, cfg);
  const fiber_spec fiber{-2.27e-26, 1e4};

  std::printf("tau_p[fs]     rho   tau_s[ns]  tau_i[ns]\n");
  for (double tau : {94.58, 200.0, 400.0, 719.1, 976.0}) {
    const pump_spec pump{wp, tau, 41.0, pump_duration_convention::intensity_std};
    const double range = tau < 150 ? 0.02 : 0.02 * 94.58 / tau + 0.002;
    const auto g = compute_jsa(pump, {48.75, 48.75}, crystal, {200, range, ws, wp - ws}, cfg);
    const auto fit = fit_gaussian_2d(g);
    const auto t = time_stats_from_frequency(fit, fiber);
    std::printf("%9.2f  %7.4f  %9.4f  %9.4f\n", tau, fit.rho, t.tau_s_ns, t.tau_i_ns);
  }
}
