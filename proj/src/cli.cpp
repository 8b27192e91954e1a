// Copyright 2026 The wavecls Authors. All Rights Reserved.
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

#include "wavecls/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "wavecls/checkpoint.hpp"
#include "wavecls/csv.hpp"
#include "wavecls/embed.hpp"
#include "wavecls/error.hpp"
#include "wavecls/evaluator.hpp"
#include "wavecls/tsne.hpp"

namespace wavecls::cli {

using nlohmann::json;
namespace fs = std::filesystem;

std::size_t RunConfig::segment_samples() const {
  const double n = std::round(segment_seconds * kSampleRate);
  if (!(segment_seconds > 0.0) || n < 1.0) {
    throw UsageError("segment seconds must be positive, got " + std::to_string(segment_seconds));
  }
  return static_cast<std::size_t>(n);
}

ModelConfig RunConfig::model_config(std::size_t n_classes) const {
  ModelConfig cfg;
  cfg.encoder = encoder;
  cfg.encoder.seg_len = segment_samples();
  cfg.head.in_channels = encoder.channels;
  cfg.head.blocks = head_blocks;
  cfg.head.n_classes = n_classes;
  cfg.validate();
  return cfg;
}

RunConfig run_config_from_json(const json& j) {
  RunConfig cfg;
  try {
    if (!j.is_object()) throw ConfigError("run config must be a JSON object");
    if (j.contains("manifest")) cfg.manifest = j.at("manifest").get<std::string>();
    cfg.segment_seconds = j.value("segment_seconds", cfg.segment_seconds);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    cfg.deterministic = j.value("deterministic", cfg.deterministic);
    if (j.contains("ratios")) {
      const auto r = j.at("ratios").get<std::vector<double>>();
      if (r.size() != 3) throw ConfigError("ratios must list train, valid and test");
      cfg.ratios = {r[0], r[1], r[2]};
    }
    if (j.contains("encoder")) {
      const json& e = j.at("encoder");
      cfg.encoder.n_layers = e.value("n_layers", cfg.encoder.n_layers);
      cfg.encoder.channels = e.value("channels", cfg.encoder.channels);
      cfg.encoder.kernel = e.value("kernel", cfg.encoder.kernel);
    }
    if (j.contains("head") && j.at("head").contains("blocks")) {
      cfg.head_blocks.clear();
      for (const json& b : j.at("head").at("blocks")) {
        cfg.head_blocks.push_back({b.at("out_channels").get<std::size_t>(),
                                   b.value("conv_kernel", std::size_t{3}),
                                   b.value("pool_window", std::size_t{4}),
                                   b.value("pool_stride", std::size_t{4})});
      }
    }
    if (j.contains("train")) cfg.train = train_config_from_json(j.at("train"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("run config: ") + e.what());
  }
  return cfg;
}

json to_json(const RunConfig& cfg) {
  json blocks = json::array();
  for (const auto& b : cfg.head_blocks) {
    blocks.push_back({{"out_channels", b.out_channels},
                      {"conv_kernel", b.conv_kernel},
                      {"pool_window", b.pool_window},
                      {"pool_stride", b.pool_stride}});
  }
  return {{"manifest", cfg.manifest.string()},
          {"segment_seconds", cfg.segment_seconds},
          {"seed", cfg.seed},
          {"out", cfg.out.string()},
          {"deterministic", cfg.deterministic},
          {"ratios", {cfg.ratios.train, cfg.ratios.valid, cfg.ratios.test}},
          {"encoder",
           {{"n_layers", cfg.encoder.n_layers},
            {"channels", cfg.encoder.channels},
            {"kernel", cfg.encoder.kernel}}},
          {"head", {{"blocks", std::move(blocks)}}},
          {"train", to_json(cfg.train)}};
}

bool is_standard_segment_seconds(double seconds) {
  return seconds == 0.5 || seconds == 1.0 || seconds == 1.5 || seconds == 2.0;
}

std::string format_duration(double seconds) {
  const auto minutes = static_cast<long long>(std::max(0.0, seconds) / 60.0);
  return std::to_string(minutes / 60) + "h " + std::to_string(minutes % 60) + "min";
}

namespace {

std::string read_text(const fs::path& path) {
  const auto bytes = read_file_bytes(path);
  return {bytes.begin(), bytes.end()};
}

void write_text(const fs::path& path, const std::string& text) {
  write_file_bytes(path,
                   std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string format_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", s);
  return buf;
}

// Options every subcommand accepts. Unset optionals leave the config file
// value alone.
struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> segment_seconds;
  std::optional<std::string> manifest;
  std::string level = "both";
  bool deterministic = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_manifest) {
  cmd->add_option("--config", f.config, "JSON run configuration");
  cmd->add_option("--seed", f.seed, "Random seed");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--segment-seconds", f.segment_seconds, "Segment length in seconds");
  cmd->add_option("--level", f.level, "Evaluation level")
      ->check(CLI::IsMember({"segment", "song", "both"}));
  cmd->add_flag("--deterministic", f.deterministic,
                "Omit wall-clock timing so reruns give identical files");
  if (with_manifest) cmd->add_option("--manifest", f.manifest, "Dataset manifest CSV");
}

RunConfig resolve_config(const CommonFlags& f, std::ostream& err) {
  RunConfig cfg;
  if (!f.config.empty()) {
    json j;
    try {
      j = json::parse(read_text(f.config));
    } catch (const json::parse_error& e) {
      throw ConfigError("config " + f.config + ": " + e.what());
    }
    cfg = run_config_from_json(j);
  }
  if (f.seed) cfg.seed = *f.seed;
  if (f.out) cfg.out = *f.out;
  if (f.segment_seconds) cfg.segment_seconds = *f.segment_seconds;
  if (f.manifest) cfg.manifest = *f.manifest;
  if (f.deterministic) cfg.deterministic = true;
  cfg.train.seed = cfg.seed;
  cfg.segment_samples();  // rejects non-positive lengths
  if (!is_standard_segment_seconds(cfg.segment_seconds)) {
    err << "warning: segment length " << format_seconds(cfg.segment_seconds)
        << " s is outside the usual {0.5, 1, 1.5, 2} s\n";
  }
  return cfg;
}

DatasetManifest require_manifest(const RunConfig& cfg) {
  if (cfg.manifest.empty()) throw UsageError("no manifest given (--manifest or config)");
  return load_manifest(cfg.manifest);
}

std::vector<Segment> load_segments(const DatasetManifest& manifest,
                                   const std::vector<ManifestEntry>& entries,
                                   std::size_t seg_len) {
  std::vector<Segment> out;
  for (const auto& e : entries) {
    auto segs = segment_track(load_track(manifest, e), seg_len);
    std::move(segs.begin(), segs.end(), std::back_inserter(out));
  }
  return out;
}

void require_same_classes(const Checkpoint& ckpt, const DatasetManifest& manifest) {
  const auto names = manifest.class_names();
  require_label_space(ckpt, names.size());
  if (names != ckpt.class_names) {
    throw ConfigError("manifest artists do not match the checkpoint's artists");
  }
}

// ---- prepare -------------------------------------------------------------

int cmd_prepare(const CommonFlags& f, const std::vector<double>& ratio_list, std::ostream& out,
                std::ostream& err) {
  RunConfig cfg = resolve_config(f, err);
  if (!ratio_list.empty()) {
    if (ratio_list.size() != 3) throw UsageError("--ratios takes three values");
    cfg.ratios = {ratio_list[0], ratio_list[1], ratio_list[2]};
  }
  try {
    validate_ratios(cfg.ratios);
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
  const DatasetManifest manifest = require_manifest(cfg);
  const DatasetManifest split = split_by_song(manifest, cfg.ratios, cfg.seed);

  fs::create_directories(cfg.out);
  const fs::path out_dir = fs::absolute(cfg.out).lexically_normal();
  std::vector<ManifestEntry> rebased;
  std::map<Split, std::pair<std::size_t, double>> totals;
  for (ManifestEntry e : split.entries()) {
    const fs::path audio = fs::absolute(split.resolve(e)).lexically_normal();
    const auto info = inspect_wav(read_file_bytes(audio));
    auto& [count, seconds] = totals[e.split];
    ++count;
    seconds += info.duration_seconds();
    const fs::path rel = audio.lexically_relative(out_dir);
    e.path = (rel.empty() ? audio : rel).generic_string();
    rebased.push_back(std::move(e));
  }
  const fs::path target = cfg.out / "manifest.csv";
  save_manifest(DatasetManifest(std::move(rebased), out_dir), target);

  out << "split   tracks  duration\n";
  for (Split s : {Split::kTrain, Split::kValid, Split::kTest}) {
    const auto [count, seconds] = totals[s];
    char line[96];
    std::snprintf(line, sizeof(line), "%-7s %6zu  %s\n", std::string(to_string(s)).c_str(),
                  count, format_duration(seconds).c_str());
    out << line;
  }
  out << "wrote " << target.string() << "\n";
  return 0;
}

// ---- train ---------------------------------------------------------------

TrainResult train_run(const RunConfig& cfg, std::ostream& out) {
  const DatasetManifest manifest = require_manifest(cfg);
  const auto train_entries = manifest.subset(Split::kTrain);
  const auto valid_entries = manifest.subset(Split::kValid);
  if (train_entries.empty()) throw DataError("manifest has no train split");
  if (valid_entries.empty()) throw DataError("manifest has no valid split");

  const auto classes = manifest.class_names();
  const ModelConfig model_cfg = cfg.model_config(classes.size());
  const auto train_set = load_segments(manifest, train_entries, model_cfg.encoder.seg_len);
  const auto valid_set = load_segments(manifest, valid_entries, model_cfg.encoder.seg_len);
  out << "train " << train_set.size() << " segments, valid " << valid_set.size()
      << " segments, " << classes.size() << " artists\n";

  TrainHooks hooks;
  hooks.on_epoch = [&](const EpochRecord& r) {
    char line[128];
    std::snprintf(line, sizeof(line), "epoch %zu  loss %.5f  valid acc %.4f\n", r.epoch,
                  r.train_loss, r.valid_accuracy);
    out << line << std::flush;
  };
  TrainResult result =
      train(build_model<float>(model_cfg, cfg.seed), train_set, valid_set, cfg.train, hooks);
  result.best.class_names = classes;
  result.best.meta.segment_seconds = cfg.segment_seconds;

  fs::create_directories(cfg.out);
  save_checkpoint(result.best, cfg.out / "best.ckpt");
  write_text(cfg.out / "history.json",
             to_json(result.history, !cfg.deterministic).dump(2) + "\n");
  out << "best epoch " << result.history.best_epoch << ", valid accuracy "
      << result.history.best_valid_accuracy << "\n";
  return result;
}

// ---- eval ----------------------------------------------------------------

struct EvalOutcome {
  std::optional<EvalReport> segment;
  std::optional<EvalReport> song;
};

EvalOutcome eval_run(const Checkpoint& ckpt, const DatasetManifest& manifest, Split split,
                     const std::string& level, const fs::path& out_dir, std::ostream& out) {
  require_same_classes(ckpt, manifest);
  const auto entries = manifest.subset(split);
  if (entries.empty()) {
    throw DataError("manifest has no " + std::string(to_string(split)) + " split");
  }
  const auto segments = load_segments(manifest, entries, ckpt.config().encoder.seg_len);
  if (segments.empty()) throw DataError("no track is long enough for one segment");
  const auto logits = batch_logits(ckpt.params, segments);
  std::vector<PredictionRecord> records;
  records.reserve(segments.size());
  for (std::size_t i = 0; i < segments.size(); ++i) {
    records.push_back(make_record(segments[i].id(), segments[i].parent_track_id,
                                  segments[i].label, logits[i]));
  }
  const std::size_t n = ckpt.class_names.size();
  fs::create_directories(out_dir);
  write_text(out_dir / "predictions.csv", format_predictions_csv(records, n));

  EvalOutcome outcome;
  auto emit = [&](EvalLevel lvl) {
    EvalReport report = evaluate(records, lvl, n);
    const std::string name(to_string(lvl));
    write_text(out_dir / ("report_" + name + ".json"), to_json(report).dump(2) + "\n");
    write_text(out_dir / ("confusion_" + name + ".csv"),
               format_confusion_csv(report.confusion, ckpt.class_names));
    char line[160];
    std::snprintf(line, sizeof(line),
                  "%-7s items %5zu  accuracy %.4f  precision %.4f  recall %.4f  f1 %.4f\n",
                  name.c_str(), report.item_count, report.macro.multiclass_accuracy,
                  report.macro.precision, report.macro.recall, report.macro.f1);
    out << line;
    return report;
  };
  if (level != "song") outcome.segment = emit(EvalLevel::kSegment);
  if (level != "segment") outcome.song = emit(EvalLevel::kSong);
  return outcome;
}

// ---- sweep ---------------------------------------------------------------

int cmd_sweep(const CommonFlags& f, std::vector<double> sizes, const std::string& split_name,
              std::ostream& out, std::ostream& err) {
  RunConfig base = resolve_config(f, err);
  if (sizes.empty()) sizes = {0.5, 1.0, 1.5, 2.0};
  for (double s : sizes) {
    if (!(s > 0.0)) throw UsageError("sweep sizes must be positive");
  }
  const Split split = parse_split(split_name);
  const DatasetManifest manifest = require_manifest(base);

  std::string table = csv::format_row(
      {"segment_size_s", "segment_accuracy", "segment_precision", "segment_recall",
       "segment_f1", "song_accuracy", "song_precision", "song_recall", "song_f1"});
  for (double s : sizes) {
    RunConfig cfg = base;
    cfg.segment_seconds = s;
    cfg.out = base.out / ("size_" + format_seconds(s));
    if (!is_standard_segment_seconds(s)) {
      err << "warning: segment length " << format_seconds(s)
          << " s is outside the usual {0.5, 1, 1.5, 2} s\n";
    }
    out << "== segment size " << format_seconds(s) << " s\n";
    const TrainResult trained = train_run(cfg, out);
    const EvalOutcome r = eval_run(trained.best, manifest, split, "both", cfg.out, out);
    csv::Row row = {format_seconds(s)};
    char buf[32];
    for (const EvalReport* rep : {&*r.segment, &*r.song}) {
      for (double v : {rep->macro.multiclass_accuracy, rep->macro.precision, rep->macro.recall,
                       rep->macro.f1}) {
        std::snprintf(buf, sizeof(buf), "%.6f", v);
        row.emplace_back(buf);
      }
    }
    table += csv::format_row(row);
  }
  fs::create_directories(base.out);
  write_text(base.out / "sweep.csv", table);
  out << table;
  return 0;
}

// ---- predict -------------------------------------------------------------

int cmd_predict(const std::string& ckpt_path, const std::string& wav_path,
                const std::string& channel, std::ostream& out) {
  const Checkpoint ckpt = load_checkpoint(ckpt_path);
  AudioTrack track = load_wav(wav_path, parse_channel(channel));
  track.track_id = fs::path(wav_path).stem().string();
  const std::size_t seg_len = ckpt.config().encoder.seg_len;
  if (track.samples.size() < seg_len) {
    char msg[160];
    std::snprintf(msg, sizeof(msg), "audio too short: %.3f s, one segment needs %.3f s",
                  track.duration_seconds(), static_cast<double>(seg_len) / kSampleRate);
    throw DataError(msg);
  }
  const auto segments = segment_track(track, seg_len);
  const auto logits = batch_logits(ckpt.params, segments);
  std::vector<PredictionRecord> records;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    records.push_back(make_record(segments[i].id(), track.track_id, 0, logits[i]));
  }
  const PredictionRecord voted = song_vote(records).front();
  const auto& names = ckpt.class_names;

  out << "artist: " << names[voted.pred_label] << "\n";
  std::vector<std::size_t> votes(names.size(), 0);
  for (const auto& r : records) ++votes[r.pred_label];
  out << "votes:";
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (votes[c]) out << " " << names[c] << "=" << votes[c];
  }
  out << "\nsegment  start_s  artist  probability\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    char line[160];
    std::snprintf(line, sizeof(line), "%7zu  %7.2f  %s  %.4f\n", i,
                  static_cast<double>(segments[i].offset) / kSampleRate,
                  names[records[i].pred_label].c_str(),
                  records[i].probs[records[i].pred_label]);
    out << line;
  }
  return 0;
}

// ---- embed ---------------------------------------------------------------

struct EmbedFlags {
  std::string checkpoint;
  std::string split = "test";
  std::string granularity = "segment";
  double perplexity = 30.0;
  std::size_t iterations = 1000;
};

int cmd_embed(const CommonFlags& f, const EmbedFlags& e, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = resolve_config(f, err);
  const Checkpoint ckpt = load_checkpoint(e.checkpoint);
  const DatasetManifest manifest = require_manifest(cfg);
  require_same_classes(ckpt, manifest);
  const Granularity granularity = parse_granularity(e.granularity);
  const auto entries = manifest.subset(parse_split(e.split));
  if (entries.empty()) throw DataError("manifest has no " + e.split + " split");
  const auto segments = load_segments(manifest, entries, ckpt.config().encoder.seg_len);

  EmbeddingSet set = extract_embeddings(ckpt, segments);
  if (granularity == Granularity::kTrack) {
    std::vector<std::string> tracks;
    for (const auto& s : segments) tracks.push_back(s.parent_track_id);
    set = mean_by_track(set, tracks);
  }

  TsneConfig tc;
  tc.perplexity = e.perplexity;
  tc.iterations = e.iterations;
  tc.seed = cfg.seed;
  const double limit = static_cast<double>(set.size()) / 3.0;
  if (set.size() >= 4 && !(tc.perplexity < limit)) {
    tc.perplexity = 0.5 * (1.0 + limit);
    err << "warning: perplexity " << e.perplexity << " too large for " << set.size()
        << " points; using " << tc.perplexity << "\n";
  }
  const TsneResult result = tsne(set.points, set.dim, tc);
  fs::create_directories(cfg.out);
  const fs::path target = cfg.out / "embedding.csv";
  export_embedding_csv(result.coords, set.labels, set.ids, ckpt.class_names, target);
  out << "embedded " << set.size() << " " << to_string(granularity) << "s, KL "
      << result.initial_kl << " -> " << result.final_kl << "\nwrote " << target.string()
      << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"wavecls: artist classification from raw waveforms", "wavecls"};
  app.require_subcommand(1);

  CommonFlags prepare_flags;
  std::vector<double> ratios;
  auto* prepare = app.add_subcommand("prepare", "Assign train/valid/test splits per artist");
  add_common(prepare, prepare_flags, true);
  prepare->add_option("--ratios", ratios, "Train,valid,test fractions")->delimiter(',');

  CommonFlags train_flags;
  auto* train_cmd = app.add_subcommand("train", "Train a model on the train split");
  add_common(train_cmd, train_flags, true);

  CommonFlags eval_flags;
  std::string eval_ckpt;
  std::string eval_split = "test";
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint at segment and song level");
  add_common(eval, eval_flags, true);
  eval->add_option("--checkpoint", eval_ckpt, "Checkpoint file")->required();
  eval->add_option("--split", eval_split, "Split to evaluate")
      ->check(CLI::IsMember({"train", "valid", "test"}));

  CommonFlags sweep_flags;
  std::vector<double> sizes;
  std::string sweep_split = "valid";
  auto* sweep = app.add_subcommand("sweep", "Train and evaluate per segment size");
  add_common(sweep, sweep_flags, true);
  sweep->add_option("--sizes", sizes, "Segment sizes in seconds")->delimiter(',');
  sweep->add_option("--split", sweep_split, "Split to evaluate")
      ->check(CLI::IsMember({"train", "valid", "test"}));

  CommonFlags predict_flags;
  std::string predict_ckpt;
  std::string wav;
  std::string channel = "mono";
  auto* predict_cmd = app.add_subcommand("predict", "Name the artist of one WAV file");
  add_common(predict_cmd, predict_flags, false);
  predict_cmd->add_option("--checkpoint", predict_ckpt, "Checkpoint file")->required();
  predict_cmd->add_option("wav", wav, "16 kHz PCM WAV file")->required();
  predict_cmd->add_option("--channel", channel, "mono, left or right")
      ->check(CLI::IsMember({"mono", "left", "right"}));

  CommonFlags embed_flags;
  EmbedFlags embed_opts;
  auto* embed = app.add_subcommand("embed", "Project bottleneck vectors to 2-D with t-SNE");
  add_common(embed, embed_flags, true);
  embed->add_option("--checkpoint", embed_opts.checkpoint, "Checkpoint file")->required();
  embed->add_option("--split", embed_opts.split, "Split to embed")
      ->check(CLI::IsMember({"train", "valid", "test"}));
  embed->add_option("--granularity", embed_opts.granularity, "segment or track")
      ->check(CLI::IsMember({"segment", "track"}));
  embed->add_option("--perplexity", embed_opts.perplexity, "t-SNE perplexity");
  embed->add_option("--tsne-iterations", embed_opts.iterations, "t-SNE iterations");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    // --help exits 0; every other parse failure is misuse.
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (*prepare) return cmd_prepare(prepare_flags, ratios, out, err);
    if (*train_cmd) {
      train_run(resolve_config(train_flags, err), out);
      return 0;
    }
    if (*eval) {
      const RunConfig cfg = resolve_config(eval_flags, err);
      eval_run(load_checkpoint(eval_ckpt), require_manifest(cfg), parse_split(eval_split),
               eval_flags.level, cfg.out, out);
      return 0;
    }
    if (*sweep) return cmd_sweep(sweep_flags, sizes, sweep_split, out, err);
    if (*predict_cmd) return cmd_predict(predict_ckpt, wav, channel, out);
    if (*embed) return cmd_embed(embed_flags, embed_opts, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace wavecls::cli
