#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace coca::tok {

// Byte-level alphabet (0..255) plus two specials used by the synthetic tasks.
inline constexpr int kSep = 256;    // record separator
inline constexpr int kQuery = 257;  // query marker
inline constexpr int kVocabSize = 258;

std::vector<int> encode(std::string_view text);

// Specials render as '\n' (kSep) and '?' (kQuery) so decoded text stays printable.
std::string decode(std::span<const int> tokens);

}  // namespace coca::tok
