// Copyright 2026 The Clausefair Authors.
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

// Regenerates the synthetic fixture corpora.
//
//   make_fixtures [output-dir]

#include <iostream>

#include "fixtures.hpp"

int main(int argc, char** argv) {
  const std::filesystem::path root = argc > 1 ? argv[1] : CLAUSEFAIR_FIXTURE_DIR;
  try {
    const auto files = clausefair::fixtures::all_fixtures();
    clausefair::fixtures::write_fixtures(files, root);
    std::cout << "wrote " << files.size() << " files under " << root.string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "make_fixtures: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
