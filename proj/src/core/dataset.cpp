#include "core/dataset.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "core/rng.hpp"

namespace chanpred::ds {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* kHeader = "tx_x,tx_y,tx_z,rx_x,rx_y,rx_z,h_re,h_im";

std::string meta_path_for(const std::string& csv_path) {
  if (csv_path.size() > 4 && csv_path.substr(csv_path.size() - 4) == ".csv")
    return csv_path.substr(0, csv_path.size() - 4) + ".meta.json";
  return csv_path + ".meta.json";
}

}  // namespace

Dataset generate_dataset(const scene::Scene& s, const LocalPoint& tx, int rx_count,
                         double rx_height, const rt::TraceConfig& trace_cfg,
                         const channel::PruningConfig& prune_cfg, std::uint64_t seed,
                         int workers) {
  if (rx_count <= 0) throw std::invalid_argument("rx_count must be positive");
  if (tx.z < s.terrain_z) throw std::invalid_argument("tx below terrain");
  const auto receivers = scene::sample_receiver_positions(s, rx_count, rx_height, seed);

  std::vector<std::optional<ChannelSample>> results(receivers.size());
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= receivers.size()) break;
      const auto& rx = receivers[i];
      auto paths = rt::trace_paths(s, tx, rx, trace_cfg);
      if (paths.empty()) continue;
      auto kept = channel::prune_paths(paths, prune_cfg);
      kept = channel::los_set(kept, tx, rx, prune_cfg);
      auto h = channel::narrowband_coefficient(kept, trace_cfg.carrier_frequency_hz);
      if (!h) continue;
      results[i] = ChannelSample{tx, rx, h->real(), h->imag()};
    }
  };
  const int n_threads = std::max(1, workers);
  if (n_threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  Dataset d;
  for (auto& r : results)
    if (r) d.samples.push_back(*r);
  d.meta.total_receivers = static_cast<long>(receivers.size());
  d.meta.valid_count = static_cast<long>(d.samples.size());
  d.meta.valid_ratio =
      static_cast<double>(d.meta.valid_count) / static_cast<double>(d.meta.total_receivers);
  d.meta.seed = seed;
  d.meta.trace_cfg = trace_cfg;
  d.meta.prune_cfg = prune_cfg;
  d.meta.scene_hash = fnv1a(scene::scene_to_json(s));
  return d;
}

DatasetStats dataset_stats(const Dataset& d) {
  const size_t n = d.samples.size();
  if (n < 2) throw std::domain_error("dataset_stats: need at least 2 samples");
  DatasetStats st;
  for (const auto& s : d.samples) {
    st.mean_re += s.h_re;
    st.mean_im += s.h_im;
  }
  st.mean_re /= n;
  st.mean_im /= n;
  for (const auto& s : d.samples) {
    st.var_re += (s.h_re - st.mean_re) * (s.h_re - st.mean_re);
    st.var_im += (s.h_im - st.mean_im) * (s.h_im - st.mean_im);
  }
  st.var_re /= n;  // population variance
  st.var_im /= n;
  return st;
}

Split split(const Dataset& d, const SplitSpec& spec) {
  const long n = static_cast<long>(d.samples.size());
  if (spec.model_subset_size > n)
    throw std::domain_error("split: model_subset_size exceeds dataset size");
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
    throw std::domain_error("split: train_fraction must be in (0, 1)");
  std::vector<long> idx(n);
  for (long i = 0; i < n; ++i) idx[i] = i;
  Rng rng(spec.seed);
  for (long i = n - 1; i > 0; --i) {  // Fisher-Yates
    const long j = static_cast<long>(rng.next_below(static_cast<std::uint64_t>(i + 1)));
    std::swap(idx[i], idx[j]);
  }
  const long subset = spec.model_subset_size;
  const long n_train = std::lround(spec.train_fraction * static_cast<double>(subset));
  Split out;
  out.train.assign(idx.begin(), idx.begin() + n_train);
  out.validation.assign(idx.begin() + n_train, idx.begin() + subset);
  out.holdout.assign(idx.begin() + subset, idx.end());
  return out;
}

void write_csv(const Dataset& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write dataset: " + path);
  out << kHeader << "\n";
  for (const auto& s : d.samples) {
    out << fmt17(s.tx.x) << ',' << fmt17(s.tx.y) << ',' << fmt17(s.tx.z) << ','
        << fmt17(s.rx.x) << ',' << fmt17(s.rx.y) << ',' << fmt17(s.rx.z) << ','
        << fmt17(s.h_re) << ',' << fmt17(s.h_im) << "\n";
  }
  out.close();

  nlohmann::ordered_json meta;
  meta["total_receivers"] = d.meta.total_receivers;
  meta["valid_count"] = d.meta.valid_count;
  meta["valid_ratio"] = d.meta.valid_ratio;
  meta["seed"] = d.meta.seed;
  meta["trace_cfg"] = {{"max_reflection_order", d.meta.trace_cfg.max_reflection_order},
                       {"carrier_frequency_hz", d.meta.trace_cfg.carrier_frequency_hz},
                       {"tx_power_w", d.meta.trace_cfg.tx_power_w}};
  meta["prune_cfg"] = {{"delta_th_db", d.meta.prune_cfg.delta_th_db},
                       {"epsilon_tau_s", d.meta.prune_cfg.epsilon_tau_s}};
  meta["scene_hash"] = d.meta.scene_hash;
  std::ofstream mout(meta_path_for(path), std::ios::binary);
  if (!mout) throw std::runtime_error("cannot write meta sidecar for: " + path);
  mout << meta.dump(2) << "\n";
}

Dataset read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset: " + path);
  Dataset d;
  std::string line;
  long row = 0;
  if (!std::getline(in, line) || line != kHeader)
    throw std::runtime_error("dataset header mismatch in " + path);
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream ss(line);
    double v[8];
    std::string cell;
    int col = 0;
    while (std::getline(ss, cell, ',')) {
      if (col >= 8)
        throw std::runtime_error("row " + std::to_string(row) + ": too many columns");
      try {
        size_t pos = 0;
        v[col] = std::stod(cell, &pos);
        if (pos != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw std::runtime_error("row " + std::to_string(row) + ": bad value '" + cell + "'");
      }
      ++col;
    }
    if (col != 8)
      throw std::runtime_error("row " + std::to_string(row) + ": expected 8 columns, got " +
                               std::to_string(col));
    d.samples.push_back({{v[0], v[1], v[2]}, {v[3], v[4], v[5]}, v[6], v[7]});
  }

  std::ifstream min(meta_path_for(path));
  if (min) {
    nlohmann::json meta = nlohmann::json::parse(min);
    d.meta.total_receivers = meta.value("total_receivers", 0L);
    d.meta.valid_count = meta.value("valid_count", static_cast<long>(d.samples.size()));
    d.meta.valid_ratio = meta.value("valid_ratio", 0.0);
    d.meta.seed = meta.value("seed", std::uint64_t{0});
    if (meta.contains("trace_cfg")) {
      const auto& t = meta["trace_cfg"];
      d.meta.trace_cfg.max_reflection_order = t.value("max_reflection_order", 2);
      d.meta.trace_cfg.carrier_frequency_hz = t.value("carrier_frequency_hz", 7.0e9);
      d.meta.trace_cfg.tx_power_w = t.value("tx_power_w", 1.0);
    }
    if (meta.contains("prune_cfg")) {
      const auto& p = meta["prune_cfg"];
      d.meta.prune_cfg.delta_th_db = p.value("delta_th_db", 30.0);
      d.meta.prune_cfg.epsilon_tau_s = p.value("epsilon_tau_s", 57.76e-9);
    }
    d.meta.scene_hash = meta.value("scene_hash", std::uint64_t{0});
  } else {
    d.meta.total_receivers = d.meta.valid_count = static_cast<long>(d.samples.size());
    d.meta.valid_ratio = d.samples.empty() ? 0.0 : 1.0;
  }
  return d;
}

}  // namespace chanpred::ds
