#pragma once

#include "pwb/dispersion.hpp"

namespace pwb::materials {

// KTP, Kato & Takaoka (2002).
inline sellmeier_set ktp_x() { return {3.29100, 0.04140, 0.03978, 9.35522, 31.45571}; }
inline sellmeier_set ktp_y() { return {3.45018, 0.04341, 0.04597, 16.98825, 39.43799}; }
inline sellmeier_set ktp_z() { return {4.59423, 0.06206, 0.04763, 110.807, 86.122}; }

// z set refitted against the 392-403 nm PPKTP pump sweep; a3, a4 kept from the literature.
inline sellmeier_set ppktp_refit_z() { return {4.59423, 0.06272, 0.04814, 110.807, 86.122}; }

inline crystal_spec ppktp_396(const sellmeier_set& z = ktp_z()) {
  crystal_spec c;
  c.name = "PPKTP 4.01 um";
  c.z = z;
  c.poling_period_um = 4.01;
  return c;
}

inline crystal_spec ppktp_type2() {
  crystal_spec c;
  c.name = "PPKTP 46.2 um type II";
  c.x = ktp_x();
  c.y = ktp_y();
  c.z = ktp_z();
  c.poling_period_um = 46.2;
  return c;
}

}  // namespace pwb::materials
