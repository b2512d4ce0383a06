#pragma once

#include "spectral.hpp"

#include <optional>
#include <vector>

namespace estc {

template <class Real> struct GroundState {
  std::vector<SpectralPoint<Real>> coarse;
  LineSearch<Real> search;
  std::vector<SpectralPoint<Real>> at_lines;  // full spectrum at each refined xi0
  std::vector<SolutionFamily<Real>> families;
  std::optional<Doublet<Real>> doublet;
};

// Coarse scan, line seeding and refinement, then doublet analytics when two lines exist.
template <class Real>
GroundState<Real> ground_state(const Problem<Real>& pb, Real lo, Real hi, int steps, const RefineOptions& opt = {},
                               int jobs = 1) {
  GroundState<Real> gs;
  gs.coarse = scan(pb, lo, hi, steps, jobs);
  gs.search = find_lines(pb, lo, hi, gs.coarse, 2, opt, jobs);
  for (const auto& l : gs.search.lines) {
    auto ev = evaluate(pb, l.xi0);
    gs.at_lines.push_back(ev.point);
    gs.families.push_back(std::move(ev.family));
  }
  if (gs.search.lines.size() == 2)
    gs.doublet = doublet_analysis(gs.search.lines[0], gs.search.lines[1], gs.families[0], gs.families[1]);
  return gs;
}

}  // namespace estc
