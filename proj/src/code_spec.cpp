#include "srumcc/code_spec.hpp"

#include <sstream>
#include <stdexcept>

namespace srumcc {

namespace {

uint32_t parse_octal(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("code spec: empty octal tap");
  uint32_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '7') throw std::invalid_argument("code spec: bad octal digit in '" + s + "'");
    v = v * 8 + static_cast<uint32_t>(c - '0');
  }
  return v;
}

}  // namespace

int CodeSpec::n() const {
  if (family == Family::rm_product) return 8 * rm_copies;
  return static_cast<int>(octal_taps.size()) * k;
}

std::string CodeSpec::to_string() const {
  if (family == Family::rm_product) return "rm84x" + std::to_string(rm_copies);
  std::ostringstream os;
  os << "conv:[";
  for (size_t i = 0; i < octal_taps.size(); ++i) {
    if (i) os << ",";
    os << std::oct << octal_taps[i] << std::dec;
  }
  os << "]o:k=" << k << ":" << (mode == TrellisMode::tail_biting ? "tb" : "trunc");
  return os.str();
}

CodeSpec CodeSpec::parse(const std::string& text) {
  CodeSpec spec;
  if (text.rfind("rm84x", 0) == 0) {
    spec.family = Family::rm_product;
    spec.mode = TrellisMode::block;
    try {
      spec.rm_copies = std::stoi(text.substr(5));
    } catch (const std::exception&) {
      throw std::invalid_argument("code spec: bad copy count in '" + text + "'");
    }
    if (spec.rm_copies < 1) throw std::invalid_argument("code spec: rm84x copies must be >= 1");
    spec.k = 4 * spec.rm_copies;
    return spec;
  }
  if (text.rfind("conv:[", 0) != 0)
    throw std::invalid_argument("code spec: expected 'conv:[...]o:k=N:tb|trunc' or 'rm84xN', got '" + text + "'");
  size_t close = text.find("]o:", 6);
  if (close == std::string::npos)
    throw std::invalid_argument("code spec: missing ']o:' in '" + text + "'");
  std::string taps = text.substr(6, close - 6);
  std::istringstream ts(taps);
  std::string tok;
  while (std::getline(ts, tok, ',')) spec.octal_taps.push_back(parse_octal(tok));
  if (spec.octal_taps.empty()) throw std::invalid_argument("code spec: no taps in '" + text + "'");
  std::string rest = text.substr(close + 3);
  if (rest.rfind("k=", 0) != 0)
    throw std::invalid_argument("code spec: expected 'k=' in '" + text + "'");
  size_t colon = rest.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("code spec: missing mode in '" + text + "'");
  try {
    spec.k = std::stoi(rest.substr(2, colon - 2));
  } catch (const std::exception&) {
    throw std::invalid_argument("code spec: bad info length in '" + text + "'");
  }
  if (spec.k < 1) throw std::invalid_argument("code spec: k must be >= 1");
  std::string mode = rest.substr(colon + 1);
  if (mode == "tb")
    spec.mode = TrellisMode::tail_biting;
  else if (mode == "trunc")
    spec.mode = TrellisMode::truncated;
  else
    throw std::invalid_argument("code spec: mode must be 'tb' or 'trunc', got '" + mode + "'");
  return spec;
}

}  // namespace srumcc
