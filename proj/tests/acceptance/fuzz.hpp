#pragma once

#include <cstdint>
#include <string>
#include <vector>

struct FuzzReport {
  std::size_t iterations = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double seconds = 0.0;
  std::vector<std::string> problems;  // escaped exceptions or broken invariants
};

// Mutates the seed files for `seconds` and feeds each mutant to
// parse_textgrid. Only TextGridError may escape; a grid that parses must
// satisfy the structural invariants and survive a render/parse round trip.
// Offending inputs are written to `crash_dir`.
FuzzReport fuzz_textgrid(const std::vector<std::string>& seeds, double seconds, std::uint64_t rng_seed,
                         const std::string& crash_dir);

// UTF-16 with a byte-order mark, for ASCII input.
std::string ascii_to_utf16(const std::string& ascii, bool big_endian);
