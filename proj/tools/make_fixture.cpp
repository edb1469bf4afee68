// Regenerates the bundled fixture dataset (data/fixture.csv by default).

#include <fstream>
#include <iostream>

#include "rcf/fixture.hpp"

int main(int argc, char** argv) {
  const char* path = argc > 1 ? argv[1] : "data/fixture.csv";
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write " << path << "\n";
    return 1;
  }
  rcf::fixture::write_reference_csv(out);
  std::cout << "wrote " << path << "\n";
  return 0;
}
