#include "srumcc/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <json.hpp>

#include "srumcc/rng.hpp"
#include "srumcc/srumcc_codec.hpp"

namespace srumcc {

using nlohmann::json;

namespace {

const char* kKnownKeys[] = {"code",    "L",          "snr_db",     "master_seed",
                            "r_seed",  "max_frames", "min_subframe_errors",
                            "ell_max", "window",     "keep_list",  "threshold_policy",
                            "calib_trials", "threads"};

}  // namespace

SimConfig SimConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : kKnownKeys)
      if (it.key() == k) known = true;
    if (!known) throw std::invalid_argument("config: unknown key '" + it.key() + "'");
  }
  SimConfig c;
  try {
    if (j.contains("code")) c.code = j["code"].get<std::string>();
    if (j.contains("L")) c.L = j["L"].get<int>();
    if (j.contains("snr_db")) c.snr_db = j["snr_db"].get<std::vector<double>>();
    if (j.contains("master_seed")) c.master_seed = j["master_seed"].get<uint64_t>();
    if (j.contains("r_seed")) c.r_seed = j["r_seed"].get<uint64_t>();
    if (j.contains("max_frames")) c.max_frames = j["max_frames"].get<int64_t>();
    if (j.contains("min_subframe_errors"))
      c.min_subframe_errors = j["min_subframe_errors"].get<int64_t>();
    if (j.contains("ell_max")) c.ell_max = j["ell_max"].get<int>();
    if (j.contains("window")) c.window = j["window"].get<int>();
    if (j.contains("keep_list")) c.keep_list = j["keep_list"].get<int>();
    if (j.contains("threshold_policy")) c.threshold_policy = j["threshold_policy"].get<std::string>();
    if (j.contains("calib_trials")) c.calib_trials = j["calib_trials"].get<int>();
    if (j.contains("threads")) c.threads = j["threads"].get<int>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: bad value type: ") + e.what());
  }
  c.validate();
  return c;
}

SimConfig SimConfig::from_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return from_json_text(ss.str());
}

std::string SimConfig::to_json_text() const {
  json j;
  j["code"] = code;
  j["L"] = L;
  j["snr_db"] = snr_db;
  j["master_seed"] = master_seed;
  j["r_seed"] = r_seed;
  j["max_frames"] = max_frames;
  j["min_subframe_errors"] = min_subframe_errors;
  j["ell_max"] = ell_max;
  j["window"] = window;
  j["keep_list"] = keep_list;
  j["threshold_policy"] = threshold_policy;
  j["calib_trials"] = calib_trials;
  j["threads"] = threads;
  return j.dump();
}

uint64_t SimConfig::digest() const {
  std::string s = to_json_text();
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void SimConfig::validate() const {
  CodeSpec::parse(code);  // throws on bad grammar
  if (L < 1) throw std::invalid_argument("config: L must be >= 1");
  if (snr_db.empty()) throw std::invalid_argument("config: snr_db must be nonempty");
  if (max_frames < 1) throw std::invalid_argument("config: max_frames must be >= 1");
  if (min_subframe_errors < 0) throw std::invalid_argument("config: min_subframe_errors must be >= 0");
  if (ell_max < 1) throw std::invalid_argument("config: ell_max must be >= 1");
  if (window != 2 && window != 3) throw std::invalid_argument("config: window must be 2 or 3");
  if (keep_list < 1 || keep_list > ell_max)
    throw std::invalid_argument("config: keep_list must be in [1, ell_max]");
  if (threads < 0) throw std::invalid_argument("config: threads must be >= 0");
  if (calib_trials < 1000) throw std::invalid_argument("config: calib_trials must be >= 1000");
  bool known_policy = threshold_policy == "preset-A" || threshold_policy == "preset-B" ||
                      threshold_policy == "learned" || threshold_policy.rfind("file:", 0) == 0;
  if (!known_policy)
    throw std::invalid_argument("config: threshold_policy must be preset-A, preset-B, learned or file:<path>");
}

ThresholdTable resolve_thresholds(const SimConfig& cfg, const BasicCode& basic,
                                  const RandomTransform& R) {
  if (cfg.threshold_policy == "preset-A" || cfg.threshold_policy == "preset-B") {
    ThresholdTable t = cfg.threshold_policy == "preset-A" ? ThresholdTable::preset_a()
                                                          : ThresholdTable::preset_b();
    if (t.code_id != basic.id())
      std::cerr << "warning: " << cfg.threshold_policy << " thresholds were calibrated for "
                << t.code_id << ", running " << basic.id() << "\n";
    return t;
  }
  if (cfg.threshold_policy.rfind("file:", 0) == 0)
    return ThresholdTable::load(cfg.threshold_policy.substr(5));
  CalibrationPolicy pol;
  pol.kind = CalibrationPolicy::Kind::learned;
  return calibrate_thresholds(basic, R, cfg.snr_db, cfg.ell_max, cfg.calib_trials, pol,
                              mix_seed({cfg.master_seed, 0xca11bULL}));
}

namespace {

struct PointAccumulator {
  int64_t frames = 0;
  int64_t subframe_errors = 0;
  int64_t frame_errors = 0;
  int64_t total_list_size = 0;
  std::vector<int64_t> fer_t_errors;
  std::vector<int64_t> first_error_at;

  explicit PointAccumulator(int L) : fer_t_errors(L, 0), first_error_at(L, 0) {}

  void merge(const PointAccumulator& o) {
    frames += o.frames;
    subframe_errors += o.subframe_errors;
    frame_errors += o.frame_errors;
    total_list_size += o.total_list_size;
    for (size_t i = 0; i < fer_t_errors.size(); ++i) {
      fer_t_errors[i] += o.fer_t_errors[i];
      first_error_at[i] += o.first_error_at[i];
    }
  }
};

void simulate_frame(const SimConfig& cfg, int snr_index, int64_t frame, double sigma2,
                    const BasicCode& basic, const RandomTransform& R, FrameDecoder& dec,
                    PointAccumulator& acc) {
  const int k = basic.k();
  std::vector<BitBlock> u_blocks(cfg.L, BitBlock(k));
  SplitMix64 data(mix_seed({cfg.master_seed, static_cast<uint64_t>(snr_index),
                            static_cast<uint64_t>(frame), 0xda7aULL}));
  for (auto& u : u_blocks)
    for (int i = 0; i < k; ++i) u.set(i, data.next() & 1);
  FrameSet f = encode_frame(u_blocks, basic, R);

  GaussianStream noise(mix_seed({cfg.master_seed, static_cast<uint64_t>(snr_index),
                                 static_cast<uint64_t>(frame), 0x40157ULL}));
  std::vector<ReceivedBlock> y(cfg.L + 1);
  std::vector<double> x;
  for (int t = 0; t <= cfg.L; ++t) {
    bpsk_map_into(f.c_blocks[t], x);
    y[t].sigma2 = sigma2;
    awgn_into(x, sigma2, noise, y[t].samples);
  }

  DecodeResult res = dec.decode(y);
  acc.frames++;
  acc.total_list_size += res.trace.total_list_size();
  bool any_error = false;
  int first_error = -1;
  for (int t = 0; t < cfg.L; ++t) {
    if (res.u_blocks[t] != u_blocks[t]) {
      acc.subframe_errors++;
      acc.fer_t_errors[t]++;
      if (!any_error) first_error = t;
      any_error = true;
    }
  }
  if (any_error) {
    acc.frame_errors++;
    acc.first_error_at[first_error]++;
  }
}

}  // namespace

SimRecord run_point(const SimConfig& cfg, int snr_index, const BasicCode& basic,
                    const RandomTransform& R, const ThresholdTable& thresholds) {
  auto t_start = std::chrono::steady_clock::now();
  const double snr = cfg.snr_db.at(snr_index);
  const double sigma2 = ChannelParams::from_snr_db(snr).sigma2;

  DecodeConfig dcfg;
  dcfg.ell_max = cfg.ell_max;
  dcfg.window = cfg.window;
  dcfg.keep_list = cfg.keep_list;
  dcfg.thresholds = thresholds;

  int threads = cfg.threads;
#ifdef _OPENMP
  if (threads == 0) threads = omp_get_max_threads();
#else
  threads = 1;
#endif

  PointAccumulator total(cfg.L);
  // Fixed batch size: the stopping boundary (and so every counter) must
  // not depend on the worker count.
  const int64_t batch = 256;
  int64_t next_frame = 0;
  while (next_frame < cfg.max_frames &&
         (cfg.min_subframe_errors == 0 || total.subframe_errors < cfg.min_subframe_errors)) {
    int64_t count = std::min(batch, cfg.max_frames - next_frame);
    std::vector<PointAccumulator> partial(threads, PointAccumulator(cfg.L));
#ifdef _OPENMP
#pragma omp parallel num_threads(threads)
    {
      FrameDecoder dec(basic, R, dcfg);
      int tid = omp_get_thread_num();
#pragma omp for schedule(static)
      for (int64_t i = 0; i < count; ++i)
        simulate_frame(cfg, snr_index, next_frame + i, sigma2, basic, R, dec, partial[tid]);
    }
#else
    {
      FrameDecoder dec(basic, R, dcfg);
      for (int64_t i = 0; i < count; ++i)
        simulate_frame(cfg, snr_index, next_frame + i, sigma2, basic, R, dec, partial[0]);
    }
#endif
    for (const auto& p : partial) total.merge(p);
    next_frame += count;
  }

  SimRecord rec;
  rec.snr_db = snr;
  rec.sigma2 = sigma2;
  rec.frames = total.frames;
  rec.subframes = total.frames * cfg.L;
  rec.subframe_errors = total.subframe_errors;
  rec.fer = static_cast<double>(total.subframe_errors) / static_cast<double>(rec.subframes);
  rec.fer_stderr = std::sqrt(rec.fer * (1.0 - rec.fer) / static_cast<double>(rec.subframes));
  rec.frame_errors = total.frame_errors;
  rec.frame_error_rate = static_cast<double>(total.frame_errors) / static_cast<double>(total.frames);
  rec.total_list_size = total.total_list_size;
  rec.avg_list_size = static_cast<double>(total.total_list_size) / static_cast<double>(rec.subframes);
  rec.fer_t_errors = total.fer_t_errors;
  rec.first_error_at = total.first_error_at;
  rec.fer0 = static_cast<double>(total.fer_t_errors[0]) / static_cast<double>(total.frames);
  rec.converged = cfg.min_subframe_errors == 0 || total.subframe_errors >= cfg.min_subframe_errors;
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  // Counting identities: fER_0 <= max_t fER_t <= FER <= sum_t fER_t.
  int64_t max_t = *std::max_element(rec.fer_t_errors.begin(), rec.fer_t_errors.end());
  int64_t sum_t = 0, sum_first = 0;
  for (int t = 0; t < cfg.L; ++t) {
    sum_t += rec.fer_t_errors[t];
    sum_first += rec.first_error_at[t];
  }
  if (rec.fer_t_errors[0] > max_t || max_t > rec.frame_errors || rec.frame_errors > sum_t ||
      sum_first != rec.frame_errors)
    throw std::logic_error("run_point: error accounting identity violated");
  return rec;
}

SweepResult run_sweep(const SimConfig& cfg) {
  cfg.validate();
  BasicCode basic{CodeSpec::parse(cfg.code)};
  RandomTransform R = RandomTransform::sample(cfg.r_seed, basic.n());
  SweepResult out;
  out.thresholds = resolve_thresholds(cfg, basic, R);
  out.ensemble = ensemble_wef(wef(basic));
  for (double snr : cfg.snr_db)
    if (!out.thresholds.covers(snr))
      std::cerr << "warning: threshold table does not cover " << snr
                << " dB; clamped interpolation in effect\n";
  for (int i = 0; i < static_cast<int>(cfg.snr_db.size()); ++i) {
    SimRecord rec = run_point(cfg, i, basic, R, out.thresholds);
    rec.fer0_bound = union_bound_fer0(out.ensemble, rec.sigma2);
    rec.fer_upper = fer_bound(std::min(1.0, rec.fer0_bound), cfg.L);
    out.records.push_back(std::move(rec));
  }
  return out;
}

void write_sweep_csv(std::ostream& os, const SimConfig& cfg, const SweepResult& sweep,
                     bool with_timing) {
  char buf[64];
  CodeSpec spec = CodeSpec::parse(cfg.code);
  double rate = static_cast<double>(spec.k) / spec.n() * cfg.L / (cfg.L + 1.0);
  os << "# srumcc simulate v1\n";
  os << "# config_digest=" << std::hex << cfg.digest() << std::dec << "\n";
  os << "# config=" << cfg.to_json_text() << "\n";
  os << "# threshold_policy=" << sweep.thresholds.policy << " seed=" << sweep.thresholds.seed << "\n";
  std::snprintf(buf, sizeof buf, "%.9g", rate);
  os << "# rate=" << buf << "\n";
  os << "snr_db,sigma2,frames,subframes,subframe_errors,fer,fer_stderr,FER,avg_list_size,"
        "fer0,fer0_bound,fer_bound,seconds\n";
  for (const auto& r : sweep.records) {
    auto num = [&buf](double v) {
      std::snprintf(buf, sizeof buf, "%.9g", v);
      return std::string(buf);
    };
    os << num(r.snr_db) << "," << num(r.sigma2) << "," << r.frames << "," << r.subframes << ","
       << r.subframe_errors << "," << num(r.fer) << "," << num(r.fer_stderr) << ","
       << num(r.frame_error_rate) << "," << num(r.avg_list_size) << "," << num(r.fer0) << ","
       << num(r.fer0_bound) << "," << num(r.fer_upper) << ","
       << (with_timing ? num(r.seconds) : std::string("0")) << "\n";
  }
}

}  // namespace srumcc
