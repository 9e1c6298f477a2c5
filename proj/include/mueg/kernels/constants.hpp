#pragma once

namespace mueg {

// Volume of the unit ball in dimension d.
double unit_ball_volume(int d);

// c_TF(d) = d/(d+2) * 4 pi^2 / |B_1|^{2/d}: kinetic energy density of the free gas is c_TF t^{1+2/d}.
double thomas_fermi_constant(int d);

// Prefactor of the strain/vorticity term in the kinetic bound, 1 + d^3/4.
double strain_constant(int d);

}  // namespace mueg
