#pragma once

#include "thz/models.hpp"

namespace testutil {

constexpr double kGammaEmitter = 0.03979;

// Main operating point.
inline thz::SystemParams operating_point(int n_fock = 6) {
  thz::SystemParams p;
  p.f_thz = 1000.0;
  p.omega = {499.7, 496.3};
  p.delta = {874.9, 868.9};
  p.omega_sb = {16.7, 17.5};
  p.chi = {24.4, 24.4};
  p.kappa = 59.6;
  p.gamma = {kGammaEmitter, kGammaEmitter};
  p.n_fock = n_fock;
  return p;
}

// Same cavity, stronger carriers; the conditions do not hold.
inline thz::SystemParams reference_point(int n_fock = 6) {
  thz::SystemParams p = operating_point(n_fock);
  p.omega = {537.3, 529.7};
  return p;
}

// Spectrum point; coupling off so that J = 0.
inline thz::SystemParams spectrum_point(double omega_sb) {
  thz::SystemParams p;
  p.f_thz = 1000.0;
  p.delta = {871.6, 867.4};
  p.omega = {499.8, 497.4};
  p.omega_sb = {omega_sb, omega_sb};
  p.chi = {0.0, 0.0};
  p.kappa = 1.0;  // decoupled cavity relaxes to vacuum
  p.gamma = {kGammaEmitter, kGammaEmitter};
  p.n_fock = 2;
  return p;
}

// Tomography preparation point.
inline thz::SystemParams tomography_point(int n_fock = 6) {
  thz::SystemParams p;
  p.f_thz = 1000.0;
  p.omega = {499.2, 493.1};
  p.delta = {885.9, 874.9};
  p.omega_sb = {54.3, 55.4};
  p.chi = {13.9, 13.9};
  p.kappa = 25.6;
  p.gamma = {kGammaEmitter, kGammaEmitter};
  p.n_fock = n_fock;
  return p;
}

}  // namespace testutil
