// Copyright 2026 The wavecls Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Writes the synthetic four-artist dataset used by the smoke tests.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wavecls/error.hpp"
#include "wavecls/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic oscillator dataset", "make_toy_dataset"};
  wavecls::synthetic::ToySpec spec;
  std::string out = "toy_data";
  app.add_option("--out", out, "Output directory");
  app.add_option("--artists", spec.n_artists, "Number of artists");
  app.add_option("--tracks", spec.tracks_per_artist, "Tracks per artist");
  app.add_option("--seconds", spec.track_seconds, "Track length in seconds");
  app.add_option("--noise", spec.noise, "Noise standard deviation");
  app.add_option("--seed", spec.seed, "Random seed");
  CLI11_PARSE(app, argc, argv);
  try {
    const auto manifest = wavecls::synthetic::write_toy_dataset(out, spec);
    std::cout << "wrote " << manifest.size() << " tracks to " << out << "/manifest.csv\n";
  } catch (const wavecls::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
