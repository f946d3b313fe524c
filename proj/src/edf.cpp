#include "srumcc/edf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "srumcc/numeric.hpp"
#include "srumcc/rng.hpp"
#include "srumcc/srumcc_codec.hpp"

namespace srumcc {

double edf(const BitBlock& x, std::span<const double> y, double sigma2) {
  if (x.size() != static_cast<int>(y.size()))
    throw std::invalid_argument("edf: length mismatch");
  if (sigma2 <= 0.0) throw std::invalid_argument("edf: sigma2 must be positive");
  // Per coordinate: 1 - log2(1 + exp(-2 y_i phi(x_i) / sigma^2)).
  const double ln2 = 0.6931471805599453094;
  double acc = 0.0;
  auto words = x.words();
  double scale = 2.0 / sigma2;
  for (size_t i = 0; i < y.size(); ++i) {
    bool bit = (words[i >> 6] >> (i & 63)) & 1u;
    double t = bit ? -y[i] : y[i];
    acc += softplus(-scale * t);
  }
  return 1.0 - acc / (ln2 * static_cast<double>(y.size()));
}

std::pair<double, BitBlock> m2_metric(const BitBlock& cand, const ReceivedBlock& y0,
                                      const ReceivedBlock& y1, const RandomTransform& R,
                                      const BasicCode& basic) {
  double d0 = edf(cand, y0);
  BitBlock w(basic.n());
  R.apply_into(cand, w);
  std::vector<double> z1;
  flip_into(y1.samples, w, z1);
  ViterbiResult inner = viterbi(basic.trellis(), z1);
  double d1 = edf(inner.codeword, z1, y1.sigma2);
  return {d0 + d1, std::move(inner.codeword)};
}

const char* label_name(MetricSample::Label label) {
  switch (label) {
    case MetricSample::Label::correct: return "correct";
    case MetricSample::Label::erroneous: return "erroneous";
    case MetricSample::Label::random_flip: return "random-flip";
    case MetricSample::Label::random_word: return "random-word";
  }
  return "?";
}

double ThresholdTable::lookup(double snr_db) const {
  if (entries.empty()) throw std::logic_error("ThresholdTable: empty table");
  if (snr_db <= entries.front().first) return entries.front().second;
  if (snr_db >= entries.back().first) return entries.back().second;
  for (size_t i = 1; i < entries.size(); ++i) {
    if (snr_db <= entries[i].first) {
      auto [s0, t0] = entries[i - 1];
      auto [s1, t1] = entries[i];
      double a = (snr_db - s0) / (s1 - s0);
      return t0 + a * (t1 - t0);
    }
  }
  return entries.back().second;
}

bool ThresholdTable::covers(double snr_db) const {
  return !entries.empty() && snr_db >= entries.front().first - 1e-9 &&
         snr_db <= entries.back().first + 1e-9;
}

void ThresholdTable::save(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("ThresholdTable::save: cannot open " + path);
  f << "# srumcc-thresholds v1\n";
  f << "# code_id=" << code_id << "\n";
  f << "# ell_max=" << ell_max << "\n";
  f << "# policy=" << policy << "\n";
  f << "# seed=" << seed << "\n";
  for (auto [s, t] : entries) f << s << "," << t << "\n";
  if (!f) throw std::runtime_error("ThresholdTable::save: write failed for " + path);
}

ThresholdTable ThresholdTable::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("ThresholdTable::load: cannot open " + path);
  ThresholdTable t;
  std::string line;
  bool first = true;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (first && line.find("srumcc-thresholds") == std::string::npos)
        throw std::runtime_error("ThresholdTable::load: not a threshold file: " + path);
      first = false;
      auto eat = [&](const char* key) -> std::string {
        std::string pat = std::string("# ") + key + "=";
        if (line.rfind(pat, 0) == 0) return line.substr(pat.size());
        return {};
      };
      if (auto v = eat("code_id"); !v.empty()) t.code_id = v;
      if (auto v = eat("ell_max"); !v.empty()) t.ell_max = std::stoi(v);
      if (auto v = eat("policy"); !v.empty()) t.policy = v;
      if (auto v = eat("seed"); !v.empty()) t.seed = std::stoull(v);
      continue;
    }
    first = false;
    std::istringstream ls(line);
    std::string a, b;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b))
      throw std::runtime_error("ThresholdTable::load: bad line '" + line + "'");
    t.entries.emplace_back(std::stod(a), std::stod(b));
  }
  std::sort(t.entries.begin(), t.entries.end());
  if (t.entries.empty()) throw std::runtime_error("ThresholdTable::load: no entries in " + path);
  return t;
}

ThresholdTable ThresholdTable::preset_a() {
  ThresholdTable t;
  t.code_id = "conv:[27,31]o:k=32:tb";
  t.ell_max = 64;
  t.policy = "preset-A";
  t.entries = {{2.0, 1.3}, {2.5, 1.35}, {3.0, 1.4}, {3.5, 1.45}, {4.0, 1.5}};
  return t;
}

ThresholdTable ThresholdTable::preset_b() {
  ThresholdTable t;
  t.code_id = "conv:[27,31]o:k=32:tb";
  t.ell_max = 64;
  t.policy = "preset-B";
  t.entries = {{2.0, 0.95}, {2.5, 1.0}, {3.0, 1.05}, {3.5, 1.1}, {4.0, 1.15}};
  return t;
}

namespace {

double quantile(std::vector<double>& v, double q) {
  if (v.empty()) throw std::logic_error("quantile of empty sample");
  std::sort(v.begin(), v.end());
  double pos = q * (static_cast<double>(v.size()) - 1.0);
  size_t lo = static_cast<size_t>(pos);
  size_t hi = std::min(lo + 1, v.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

// M2 populations from the two-block transmission the acceptance test
// actually faces: candidates drawn serially from the list decoder.
void sample_m2_populations(const BasicCode& basic, const RandomTransform& R, double sigma2,
                           int ell_max, int trials, uint64_t seed,
                           std::vector<double>& correct, std::vector<double>& erroneous) {
  BitBlock u0(basic.k()), u1(basic.k()), info(basic.k()), cw(basic.n());
  std::vector<double> x, y0s, y1s;
  SlvaIterator it;
  for (int tr = 0; tr < trials; ++tr) {
    SplitMix64 data(mix_seed({seed, static_cast<uint64_t>(tr), 0xca11b}));
    for (int i = 0; i < basic.k(); ++i) u0.set(i, data.next() & 1);
    for (int i = 0; i < basic.k(); ++i) u1.set(i, data.next() & 1);
    FrameSet f = encode_frame({u0, u1}, basic, R);
    GaussianStream noise(mix_seed({seed, static_cast<uint64_t>(tr), 0xca11b + 1}));
    bpsk_map_into(f.c_blocks[0], x);
    awgn_into(x, sigma2, noise, y0s);
    bpsk_map_into(f.c_blocks[1], x);
    awgn_into(x, sigma2, noise, y1s);
    ReceivedBlock y0{y0s, sigma2}, y1{y1s, sigma2};
    it.init(basic.trellis(), y0s);
    for (int ell = 1; ell <= ell_max; ++ell) {
      if (!it.next(info, cw)) break;
      auto [m2, inner] = m2_metric(cw, y0, y1, R, basic);
      if (cw == f.v_blocks[0])
        correct.push_back(m2);
      else
        erroneous.push_back(m2);
    }
  }
}

}  // namespace

ThresholdTable calibrate_thresholds(const BasicCode& basic, const RandomTransform& R,
                                    std::span<const double> snr_list, int ell_max,
                                    int trials, const CalibrationPolicy& policy, uint64_t seed) {
  if (policy.kind == CalibrationPolicy::Kind::preset_a) return ThresholdTable::preset_a();
  if (policy.kind == CalibrationPolicy::Kind::preset_b) return ThresholdTable::preset_b();
  if (trials < 1000) throw std::invalid_argument("calibrate_thresholds: need >= 1000 trials per SNR");
  ThresholdTable table;
  table.code_id = basic.id();
  table.ell_max = ell_max;
  table.policy = "learned";
  table.seed = seed;
  for (double snr : snr_list) {
    double sigma2 = ChannelParams::from_snr_db(snr).sigma2;
    uint64_t snr_key = static_cast<uint64_t>(static_cast<int64_t>(std::llround(snr * 1000.0)));
    std::vector<double> correct, erroneous;
    sample_m2_populations(basic, R, sigma2, ell_max, trials, mix_seed({seed, 0x5ca1eULL, snr_key}),
                          correct, erroneous);
    if (correct.empty())
      throw std::runtime_error("calibrate_thresholds: no correct-candidate samples; increase trials");
    // The correct-population quantile bounds the false-reject rate; the
    // erroneous-population quantile is a floor that keeps the test
    // rejecting when the two populations overlap.
    double t = quantile(correct, policy.correct_quantile);
    if (!erroneous.empty()) {
      t = std::max(t, quantile(erroneous, policy.erroneous_quantile));
    } else {
      std::cerr << "calibrate_thresholds: no erroneous samples at " << snr
                << " dB; using correct-quantile threshold only\n";
    }
    table.entries.emplace_back(snr, t);
  }
  std::sort(table.entries.begin(), table.entries.end());
  return table;
}

std::vector<MetricSample> collect_histograms(const BasicCode& basic, double sigma2,
                                             int trials, uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("collect_histograms: trials must be >= 1");
  std::vector<MetricSample> samples;
  samples.reserve(static_cast<size_t>(trials) * 4);
  BitBlock u(basic.k()), x_word(basic.n()), flip_word(basic.n());
  std::vector<double> x, y, y_flipped;
  for (int tr = 0; tr < trials; ++tr) {
    SplitMix64 data(mix_seed({seed, static_cast<uint64_t>(tr), 0x415706}));
    for (int i = 0; i < basic.k(); ++i) u.set(i, data.next() & 1);
    BitBlock v = basic.encode(u);
    bpsk_map_into(v, x);
    GaussianStream noise(mix_seed({seed, static_cast<uint64_t>(tr), 0x415707}));
    awgn_into(x, sigma2, noise, y);

    samples.push_back({edf(v, y, sigma2), MetricSample::Label::correct});

    for (int i = 0; i < basic.n(); ++i) x_word.set(i, data.next() & 1);
    samples.push_back({edf(x_word, y, sigma2), MetricSample::Label::random_word});

    ViterbiResult ml = viterbi(basic.trellis(), y);
    samples.push_back({edf(ml.codeword, y, sigma2), MetricSample::Label::erroneous});

    for (int i = 0; i < basic.n(); ++i) flip_word.set(i, data.next() & 1);
    flip_into(y, flip_word, y_flipped);
    ViterbiResult flipped = viterbi(basic.trellis(), y_flipped);
    samples.push_back({edf(flipped.codeword, y_flipped, sigma2), MetricSample::Label::random_flip});
  }
  return samples;
}

std::vector<MetricSample> collect_m2_histograms(const BasicCode& basic, const RandomTransform& R,
                                                double sigma2, int ell_max, int trials,
                                                uint64_t seed) {
  std::vector<double> correct, erroneous;
  sample_m2_populations(basic, R, sigma2, ell_max, trials, seed, correct, erroneous);
  std::vector<MetricSample> samples;
  samples.reserve(correct.size() + erroneous.size());
  for (double v : correct) samples.push_back({v, MetricSample::Label::correct});
  for (double v : erroneous) samples.push_back({v, MetricSample::Label::erroneous});
  return samples;
}

}  // namespace srumcc
