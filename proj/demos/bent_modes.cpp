#include <cstdio>

#include "pwb/bent_guide.hpp"

int main() {
  const pwb::bent_guide_spec s;
  const auto modes = pwb::solve_bent_guide(s);
  std::printf(" q  p  parity      m      <r>    n_eff  guided\n");
  for (const auto& m : modes)
    std::printf("%2d %2d  %-6s %7.3f  %6.4f  %6.4f  %s\n", m.q, m.p, pwb::to_string(m.par).c_str(), m.m, m.mean_radius,
                m.n_eff, m.physical ? "yes" : "no");
}
