// Command-line front end: Monte Carlo sweeps, threshold calibration,
// analytical bound curves, metric histograms, list-size profiling and a
// file-to-file codec for a pinned random transform.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "srumcc/bounds.hpp"
#include "srumcc/channel.hpp"
#include "srumcc/edf.hpp"
#include "srumcc/rng.hpp"
#include "srumcc/sc_decoder.hpp"
#include "srumcc/sim.hpp"
#include "srumcc/srumcc_codec.hpp"

using namespace srumcc;

namespace {

constexpr const char* kVersion = "0.1.0";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_snr_list(const std::string& s) {
  std::vector<double> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ConfigError("config error: bad --snr entry '" + tok + "'");
    }
  }
  if (out.empty()) throw ConfigError("config error: --snr list is empty");
  return out;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("io error: cannot open output file " + path);
  return f;
}

void provenance(std::ostream& os, const char* tool, const std::string& extra) {
  os << "# srumcc " << tool << " v" << kVersion << "\n";
  if (!extra.empty()) os << "# " << extra << "\n";
}

// Shared flags that override config-file values when given.
struct CommonOpts {
  std::string config_path, out_path = "-";
  std::optional<std::string> code;
  std::optional<uint64_t> seed, r_seed;
  std::optional<std::vector<double>> snr;
  std::optional<int> ell_max, window, threads, L, keep_list;
  std::optional<int64_t> max_frames, min_errors;
  std::optional<std::string> policy;
  bool timing = true;

  SimConfig resolve() const {
    SimConfig cfg;
    if (!config_path.empty()) cfg = SimConfig::from_json_file(config_path);
    if (code) cfg.code = *code;
    if (seed) cfg.master_seed = *seed;
    if (r_seed) cfg.r_seed = *r_seed;
    if (snr) cfg.snr_db = *snr;
    if (ell_max) cfg.ell_max = *ell_max;
    if (window) cfg.window = *window;
    if (threads) cfg.threads = *threads;
    if (L) cfg.L = *L;
    if (keep_list) cfg.keep_list = *keep_list;
    if (max_frames) cfg.max_frames = *max_frames;
    if (min_errors) cfg.min_subframe_errors = *min_errors;
    if (policy) cfg.threshold_policy = *policy;
    cfg.validate();
    return cfg;
  }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "JSON config file");
  cmd->add_option("--out", o.out_path, "output file ('-' for stdout)");
  auto opt_str = [&](const char* name, std::optional<std::string>& dst, const char* help) {
    cmd->add_option_function<std::string>(name, [&dst](const std::string& v) { dst = v; }, help);
  };
  opt_str("--code", o.code, "code spec, e.g. conv:[27,31]o:k=32:tb or rm84x8");
  cmd->add_option_function<uint64_t>("--seed", [&o](uint64_t v) { o.seed = v; }, "master seed");
  cmd->add_option_function<uint64_t>("--r-seed", [&o](uint64_t v) { o.r_seed = v; },
                                     "random transform seed");
  cmd->add_option_function<std::string>(
      "--snr", [&o](const std::string& v) { o.snr = parse_snr_list(v); }, "comma list of SNR dB");
  cmd->add_option_function<int>("--ell-max", [&o](int v) { o.ell_max = v; }, "maximum list size");
  cmd->add_option_function<int>("--window", [&o](int v) { o.window = v; }, "decoding window (2 or 3)");
  cmd->add_option_function<int>("--threads", [&o](int v) { o.threads = v; }, "worker threads (0=auto)");
  cmd->add_option_function<int>("--L", [&o](int v) { o.L = v; }, "blocks per frame");
  cmd->add_option_function<int>("--keep-list", [&o](int v) { o.keep_list = v; },
                                "retained candidates for window 3");
  cmd->add_option_function<int64_t>("--max-frames", [&o](int64_t v) { o.max_frames = v; },
                                    "frame budget per point");
  cmd->add_option_function<int64_t>("--min-errors", [&o](int64_t v) { o.min_errors = v; },
                                    "sub-frame error target per point");
  opt_str("--threshold-policy", o.policy, "preset-A | preset-B | learned | file:<path>");
  cmd->add_flag("--timing,!--no-timing", o.timing, "emit wall time in the seconds column");
}

int cmd_simulate(const CommonOpts& o) {
  SimConfig cfg = o.resolve();
  SweepResult sweep = run_sweep(cfg);
  if (o.out_path == "-") {
    write_sweep_csv(std::cout, cfg, sweep, o.timing);
  } else {
    auto f = open_output(o.out_path);
    write_sweep_csv(f, cfg, sweep, o.timing);
  }
  return 0;
}

int cmd_calibrate(const CommonOpts& o, int trials) {
  SimConfig cfg = o.resolve();
  BasicCode basic{CodeSpec::parse(cfg.code)};
  RandomTransform R = RandomTransform::sample(cfg.r_seed, basic.n());
  CalibrationPolicy pol;
  if (cfg.threshold_policy == "preset-A")
    pol.kind = CalibrationPolicy::Kind::preset_a;
  else if (cfg.threshold_policy == "preset-B")
    pol.kind = CalibrationPolicy::Kind::preset_b;
  else if (cfg.threshold_policy == "learned")
    pol.kind = CalibrationPolicy::Kind::learned;
  else
    throw ConfigError("config error: calibrate needs --threshold-policy preset-A, preset-B or learned");
  ThresholdTable table = calibrate_thresholds(basic, R, cfg.snr_db, cfg.ell_max, trials, pol,
                                              mix_seed({cfg.master_seed, 0xca11bULL}));
  if (o.out_path == "-") {
    std::cout << "# srumcc-thresholds v1\n# code_id=" << table.code_id
              << "\n# ell_max=" << table.ell_max << "\n# policy=" << table.policy
              << "\n# seed=" << table.seed << "\n";
    for (auto [s, t] : table.entries) std::cout << s << "," << t << "\n";
  } else {
    table.save(o.out_path);
  }
  return 0;
}

int cmd_bound(const CommonOpts& o) {
  SimConfig cfg = o.resolve();
  BasicCode basic{CodeSpec::parse(cfg.code)};
  EnsembleWEF B = ensemble_wef(wef(basic));
  std::ostringstream os;
  provenance(os, "bound", "code=" + cfg.code + " L=" + std::to_string(cfg.L));
  os << "snr_db,sigma2,fer0_bound,fer_bound\n";
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::string(buf);
  };
  for (double snr : cfg.snr_db) {
    double sigma2 = ChannelParams::from_snr_db(snr).sigma2;
    double b0 = union_bound_fer0(B, sigma2);
    os << num(snr) << "," << num(sigma2) << "," << num(b0) << "," << num(fer_bound(std::min(1.0, b0), cfg.L))
       << "\n";
  }
  if (o.out_path == "-")
    std::cout << os.str();
  else
    open_output(o.out_path) << os.str();
  return 0;
}

int cmd_histogram(const CommonOpts& o, int trials, bool m2) {
  SimConfig cfg = o.resolve();
  BasicCode basic{CodeSpec::parse(cfg.code)};
  if (cfg.snr_db.size() != 1)
    throw ConfigError("config error: histogram wants exactly one --snr value");
  double sigma2 = ChannelParams::from_snr_db(cfg.snr_db[0]).sigma2;
  std::vector<MetricSample> samples;
  std::string kind;
  if (m2) {
    RandomTransform R = RandomTransform::sample(cfg.r_seed, basic.n());
    samples = collect_m2_histograms(basic, R, sigma2, cfg.ell_max, trials,
                                    mix_seed({cfg.master_seed, 0x4157ULL}));
    kind = "m2";
  } else {
    samples = collect_histograms(basic, sigma2, trials, mix_seed({cfg.master_seed, 0x4157ULL}));
    kind = "edf";
  }
  std::ostringstream os;
  provenance(os, "histogram",
             "code=" + cfg.code + " snr_db=" + std::to_string(cfg.snr_db[0]) + " metric=" + kind);
  os << "metric,label,value\n";
  for (const auto& s : samples)
    os << kind << "," << label_name(s.label) << "," << s.value << "\n";
  if (o.out_path == "-")
    std::cout << os.str();
  else
    open_output(o.out_path) << os.str();
  return 0;
}

int cmd_list_profile(const CommonOpts& o, int64_t trials) {
  SimConfig cfg = o.resolve();
  BasicCode basic{CodeSpec::parse(cfg.code)};
  std::ostringstream os;
  provenance(os, "list-profile",
             "code=" + cfg.code + " ell_max=" + std::to_string(cfg.ell_max) +
                 " trials=" + std::to_string(trials) + " seed=" + std::to_string(cfg.master_seed));
  os << "snr_db,sigma2,trials,found,mean_rank,rank_stderr,failure_prob\n";
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::string(buf);
  };
  for (int i = 0; i < static_cast<int>(cfg.snr_db.size()); ++i) {
    double snr = cfg.snr_db[i];
    double sigma2 = ChannelParams::from_snr_db(snr).sigma2;
    ListRankProfile p = list_rank_profile(basic, cfg.ell_max, sigma2, trials,
                                          mix_seed({cfg.master_seed, static_cast<uint64_t>(i),
                                                    0x11575ULL}));
    os << num(snr) << "," << num(sigma2) << "," << p.trials << "," << p.found << ","
       << num(p.mean_rank) << "," << num(p.rank_stderr) << "," << num(p.failure_prob) << "\n";
  }
  if (o.out_path == "-")
    std::cout << os.str();
  else
    open_output(o.out_path) << os.str();
  return 0;
}

std::vector<int> read_bits(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("io error: cannot open " + path);
  std::vector<int> bits;
  char c;
  while (f.get(c)) {
    if (c == '0')
      bits.push_back(0);
    else if (c == '1')
      bits.push_back(1);
    else if (!std::isspace(static_cast<unsigned char>(c)))
      throw ConfigError("config error: input must be 0/1 text, found '" + std::string(1, c) + "'");
  }
  return bits;
}

int cmd_encode(const CommonOpts& o, const std::string& in_path) {
  SimConfig cfg = o.resolve();
  BasicCode basic{CodeSpec::parse(cfg.code)};
  RandomTransform R = RandomTransform::sample(cfg.r_seed, basic.n());
  std::vector<int> bits = read_bits(in_path);
  if (bits.empty() || bits.size() % basic.k() != 0)
    throw ConfigError("config error: input length must be a positive multiple of k=" +
                      std::to_string(basic.k()));
  int L = static_cast<int>(bits.size()) / basic.k();
  std::vector<BitBlock> u(L, BitBlock(basic.k()));
  for (int t = 0; t < L; ++t)
    for (int i = 0; i < basic.k(); ++i) u[t].set(i, bits[t * basic.k() + i]);
  FrameSet frame = encode_frame(u, basic, R);
  std::ostringstream os;
  for (const auto& c : frame.c_blocks) os << c.to_string() << "\n";
  if (o.out_path == "-")
    std::cout << os.str();
  else
    open_output(o.out_path) << os.str();
  return 0;
}

int cmd_decode(const CommonOpts& o, const std::string& in_path, const std::string& format) {
  SimConfig cfg = o.resolve();
  if (cfg.snr_db.size() != 1)
    throw ConfigError("config error: decode wants exactly one --snr value");
  BasicCode basic{CodeSpec::parse(cfg.code)};
  RandomTransform R = RandomTransform::sample(cfg.r_seed, basic.n());
  double sigma2 = ChannelParams::from_snr_db(cfg.snr_db[0]).sigma2;

  std::vector<double> samples;
  if (format == "bits") {
    for (int b : read_bits(in_path)) samples.push_back(b ? -1.0 : 1.0);
  } else if (format == "samples") {
    std::ifstream f(in_path);
    if (!f) throw IoError("io error: cannot open " + in_path);
    double v;
    while (f >> v) samples.push_back(v);
  } else {
    throw ConfigError("config error: --input-format must be bits or samples");
  }
  int n = basic.n();
  if (samples.empty() || samples.size() % n != 0 || samples.size() / n < 2)
    throw ConfigError("config error: decode input must hold at least two blocks of n=" +
                      std::to_string(n) + " values");
  int blocks = static_cast<int>(samples.size()) / n;
  std::vector<ReceivedBlock> y(blocks);
  for (int t = 0; t < blocks; ++t) {
    y[t].sigma2 = sigma2;
    y[t].samples.assign(samples.begin() + static_cast<size_t>(t) * n,
                        samples.begin() + static_cast<size_t>(t + 1) * n);
  }

  DecodeConfig dcfg;
  dcfg.ell_max = cfg.ell_max;
  dcfg.window = cfg.window;
  dcfg.keep_list = cfg.keep_list;
  dcfg.thresholds = resolve_thresholds(cfg, basic, R);
  DecodeResult res = decode_frame(y, basic, R, dcfg);
  std::ostringstream os;
  for (const auto& u : res.u_blocks) os << u.to_string() << "\n";
  if (o.out_path == "-")
    std::cout << os.str();
  else
    open_output(o.out_path) << os.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semi-random unit-memory convolutional codes: encoder, list decoder, bounds and "
               "Monte Carlo experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  CommonOpts sim_o, cal_o, bound_o, hist_o, prof_o, enc_o, dec_o;
  int cal_trials = 2000, hist_trials = 10000;
  int64_t prof_trials = 100000;
  bool hist_m2 = false;
  std::string enc_in, dec_in, dec_format = "samples";

  auto* c_sim = app.add_subcommand("simulate", "run a Monte Carlo sweep, write a results CSV");
  add_common(c_sim, sim_o);

  auto* c_cal = app.add_subcommand("calibrate", "build a threshold table file");
  add_common(c_cal, cal_o);
  c_cal->add_option("--trials", cal_trials, "calibration trials per SNR");

  auto* c_bound = app.add_subcommand("bound", "write analytical bound curves");
  add_common(c_bound, bound_o);

  auto* c_hist = app.add_subcommand("histogram", "sample metric histograms at one SNR");
  add_common(c_hist, hist_o);
  c_hist->add_option("--trials", hist_trials, "trials");
  c_hist->add_flag("--m2", hist_m2, "sample the two-term metric instead of the divergence");

  auto* c_prof = app.add_subcommand("list-profile", "rank of the transmitted word in the list");
  add_common(c_prof, prof_o);
  c_prof->add_option("--trials", prof_trials, "trials per SNR");

  auto* c_enc = app.add_subcommand("encode", "encode 0/1 text into sub-frames");
  add_common(c_enc, enc_o);
  c_enc->add_option("--in", enc_in, "input bit file")->required();

  auto* c_dec = app.add_subcommand("decode", "decode received blocks back to information bits");
  add_common(c_dec, dec_o);
  c_dec->add_option("--in", dec_in, "input file")->required();
  c_dec->add_option("--input-format", dec_format, "bits | samples");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_sim->parsed()) return cmd_simulate(sim_o);
    if (c_cal->parsed()) return cmd_calibrate(cal_o, cal_trials);
    if (c_bound->parsed()) return cmd_bound(bound_o);
    if (c_hist->parsed()) return cmd_histogram(hist_o, hist_trials, hist_m2);
    if (c_prof->parsed()) return cmd_list_profile(prof_o, prof_trials);
    if (c_enc->parsed()) return cmd_encode(enc_o, enc_in);
    if (c_dec->parsed()) return cmd_decode(dec_o, dec_in, dec_format);
  } catch (const IoError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
