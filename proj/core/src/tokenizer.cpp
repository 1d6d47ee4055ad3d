#include "coca/tokenizer.hpp"

namespace coca::tok {

std::vector<int> encode(std::string_view text) {
  std::vector<int> out;
  out.reserve(text.size());
  for (unsigned char c : text) out.push_back(static_cast<int>(c));
  return out;
}

std::string decode(std::span<const int> tokens) {
  std::string out;
  out.reserve(tokens.size());
  for (int t : tokens) {
    if (t >= 0 && t < 256) {
      out.push_back(static_cast<char>(t));
    } else if (t == kSep) {
      out.push_back('\n');
    } else if (t == kQuery) {
      out.push_back('?');
    }
  }
  return out;
}

}  // namespace coca::tok
