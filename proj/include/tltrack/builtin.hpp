#pragma once

// Bundled mission texts and the default run configuration. The files under
// missions/ carry the same content for CLI use; a test keeps them in sync.

namespace tlt::builtin {

inline constexpr const char* kPaperSec5Mission = R"json({
  "name": "paper_sec5",
  "phi_c": "F p1",
  "phi_s": "G p3",
  "x0": [1.5, -1.0],
  "plant": {"builtin": "nl2d"},
  "predicates": {
    "p1": {"type": "track_ball", "trajectory": "z1", "eps": 0.6},
    "p3": {"type": "box", "c": [-30.0, -30.0], "C": [30.0, 30.0]}
  },
  "trajectories": {
    "z1": {"builtin": "circle", "radius": 0.5, "omega": 0.5}
  }
}
)json";

inline constexpr const char* kPaperFig1Mission = R"json({
  "name": "paper_fig1",
  "phi_c": "F p2 & (!p2 U p1)",
  "phi_s": "G p3",
  "x0": [1.5, -1.0],
  "plant": {"builtin": "nl2d"},
  "predicates": {
    "p1": {"type": "track_ball", "trajectory": "z1", "eps": 0.6},
    "p2": {"type": "track_ball", "trajectory": "z2", "eps": 0.6},
    "p3": {"type": "box", "c": [-30.0, -30.0], "C": [30.0, 30.0]}
  },
  "trajectories": {
    "z1": {"builtin": "circle", "radius": 0.5, "omega": 0.5},
    "z2": {"builtin": "static", "point": [3.0, 3.0]}
  }
}
)json";

inline constexpr const char* kDefaultConfig = R"json({
  "dt": 0.001,
  "horizon": 100.0,
  "seed": 0,
  "lambda": 20.0,
  "gamma1": 0.02,
  "gamma": 2.0,
  "beta": 0.5,
  "L": 200.0,
  "q_scale": 800.0,
  "alpha": 500.0,
  "alpha_u": 10.0,
  "max_inter_event": 0.5,
  "noise": {"a0": 0.3, "kappa": 0.15, "freqs": [0.9, 1.7, 2.9, 4.3, 6.1, 7.9]},
  "noise_floor": 0.01,
  "carry_weights": true,
  "track_full_horizon": true,
  "state_cap": 4096
}
)json";

}  // namespace tlt::builtin
