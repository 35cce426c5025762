#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "minudesc/config.hpp"
#include "minudesc/eval.hpp"
#include "minudesc/image_io.hpp"
#include "minudesc/pipeline.hpp"
#include "minudesc/synth.hpp"
#include "minudesc/template_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace minudesc;

namespace {

json truth_to_json(const GroundTruth& truth) {
  json j;
  j["minutiae"] = json::array();
  for (const Minutia& m : truth.minutiae) {
    j["minutiae"].push_back(
        {{"x", m.x},
         {"y", m.y},
         {"theta", m.theta},
         {"kind", m.kind == MinutiaKind::termination ? "termination" : "bifurcation"}});
  }
  j["transform"] = {{"angle", truth.transform.angle},
                    {"tx", truth.transform.tx},
                    {"ty", truth.transform.ty},
                    {"cx", truth.transform.cx},
                    {"cy", truth.transform.cy}};
  return j;
}

GroundTruth truth_from_json(const json& j) {
  GroundTruth truth;
  for (const json& m : j.at("minutiae")) {
    Minutia out;
    out.x = m.at("x").get<double>();
    out.y = m.at("y").get<double>();
    out.theta = m.at("theta").get<double>();
    out.kind = m.at("kind").get<std::string>() == "bifurcation" ? MinutiaKind::bifurcation
                                                                : MinutiaKind::termination;
    truth.minutiae.push_back(out);
  }
  if (j.contains("transform")) {
    const json& t = j["transform"];
    truth.transform.angle = t.value("angle", 0.0);
    truth.transform.tx = t.value("tx", 0.0);
    truth.transform.ty = t.value("ty", 0.0);
    truth.transform.cx = t.value("cx", 0.0);
    truth.transform.cy = t.value("cy", 0.0);
  }
  return truth;
}

// <finger>_<impression>.(pgm|png); the finger id is everything before the
// last underscore.
bool parse_db_name(const std::string& filename, std::string& finger, std::string& impression) {
  const size_t dot = filename.find_last_of('.');
  if (dot == std::string::npos) return false;
  std::string ext = filename.substr(dot + 1);
  for (char& c : ext) c = static_cast<char>(std::tolower(c));
  if (ext != "pgm" && ext != "png") return false;
  const std::string stem = filename.substr(0, dot);
  const size_t us = stem.find_last_of('_');
  if (us == std::string::npos || us == 0 || us + 1 >= stem.size()) return false;
  finger = stem.substr(0, us);
  impression = stem.substr(us + 1);
  return true;
}

std::map<std::string, std::vector<fs::path>> scan_db_dir(const std::string& dir) {
  std::map<std::string, std::vector<fs::path>> by_finger;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const fs::path& p : files) {
    std::string finger, impression;
    if (parse_db_name(p.filename().string(), finger, impression))
      by_finger[finger].push_back(p);
  }
  if (by_finger.empty())
    throw Error(Errc::insufficient_data, "no <finger>_<impression>.pgm|png files in " + dir);
  return by_finger;
}

int run_synth(const Config& cfg, const std::string& out_dir, int fingers) {
  fs::create_directories(out_dir);
  for (int f = 0; f < fingers; ++f) {
    SynthParams params = cfg.synth;
    params.seed = stream_seed(cfg.seed, 0x66696e67, static_cast<std::uint64_t>(f));
    const auto impressions = generate_finger(params);
    for (size_t i = 0; i < impressions.size(); ++i) {
      char name[64];
      std::snprintf(name, sizeof name, "%03d_%zu", f + 1, i + 1);
      write_pgm((fs::path(out_dir) / (std::string(name) + ".pgm")).string(),
                impressions[i].image);
      std::ofstream gt(fs::path(out_dir) / (std::string(name) + ".gt.json"));
      gt << truth_to_json(impressions[i].truth).dump(2) << "\n";
    }
  }
  std::printf("wrote %d fingers x %d impressions to %s\n", fingers, cfg.synth.impressions,
              out_dir.c_str());
  return 0;
}

int run_enhance(const Config& cfg, const std::string& input, const std::string& output) {
  const GrayImage img = read_image(input);
  const RealRaster out = enhance(img, scale_for_dpi(cfg.enhance, img.dpi));
  write_pgm(output, to_gray(out, img.dpi));
  return 0;
}

int run_extract(const Config& cfg, const std::string& input, const std::string& transform_path,
                const std::string& output, const std::string& dump_enhanced) {
  const GrayImage img = read_image(input);
  if (!dump_enhanced.empty())
    write_pgm(dump_enhanced, to_gray(enhance(img, scale_for_dpi(cfg.enhance, img.dpi)), img.dpi));
  const SubspaceTransform transform = load_transform(transform_path);
  const GaborBank bank = build_bank(cfg.gabor_sigma, cfg.gabor_kmax);
  const Template t = make_template(img, cfg, bank, transform);
  save_template(output, t);
  std::printf("%zu minutiae -> %s\n", t.entries.size(), output.c_str());
  return 0;
}

LabeledJetSet training_set_from_dir(const Config& cfg, const std::string& dir,
                                    const GaborBank& bank) {
  const auto by_finger = scan_db_dir(dir);
  LabeledJetSet out;
  int next_class = 0;
  for (const auto& [finger, files] : by_finger) {
    std::map<int, int> class_of_gt;   // gt index -> class id (this finger)
    std::map<int, int> count_of_gt;
    std::vector<RawJet> jets;
    std::vector<int> gt_of_jet;
    for (const fs::path& file : files) {
      fs::path gt_path = file;
      gt_path.replace_extension();
      gt_path += ".gt.json";
      if (!fs::exists(gt_path))
        throw Error(Errc::insufficient_data, "missing ground truth " + gt_path.string());
      std::ifstream gt_in(gt_path);
      json j;
      gt_in >> j;
      const GroundTruth truth = truth_from_json(j);

      const GrayImage img = read_image(file.string());
      const ImageFeatures features = image_features(img, cfg, bank);
      for (size_t i = 0; i < features.minutiae.size(); ++i) {
        int best = -1;
        double best_d = 8.0 * img.dpi / 500.0;
        for (size_t g = 0; g < truth.minutiae.size(); ++g) {
          const double d = std::hypot(features.minutiae[i].x - truth.minutiae[g].x,
                                      features.minutiae[i].y - truth.minutiae[g].y);
          if (d < best_d &&
              angle_distance(features.minutiae[i].theta, truth.minutiae[g].theta) <= kPi / 6.0) {
            best_d = d;
            best = static_cast<int>(g);
          }
        }
        if (best >= 0) {
          jets.push_back(features.jets[i]);
          gt_of_jet.push_back(best);
          count_of_gt[best] += 1;
        }
      }
    }
    for (const auto& [gt, count] : count_of_gt)
      if (count >= 2) class_of_gt[gt] = next_class++;
    for (size_t i = 0; i < jets.size(); ++i) {
      auto it = class_of_gt.find(gt_of_jet[i]);
      if (it == class_of_gt.end()) continue;
      out.jets.push_back(jets[i]);
      out.labels.push_back(it->second);
    }
  }
  if (next_class < cfg.lda_dim + 1)
    throw Error(Errc::too_few_classes, "training dir yields only " + std::to_string(next_class) +
                                           " classes, need " + std::to_string(cfg.lda_dim + 1));
  return out;
}

int run_train(const Config& cfg, const std::string& db_dir, int synth_fingers,
              const std::string& output) {
  const GaborBank bank = build_bank(cfg.gabor_sigma, cfg.gabor_kmax);
  LabeledJetSet data;
  if (!db_dir.empty()) {
    data = training_set_from_dir(cfg, db_dir, bank);
  } else {
    TrainingPipeline pipeline;
    pipeline.enhance = cfg.enhance;
    pipeline.minutiae = cfg.minutiae;
    pipeline.bank = &bank;
    pipeline.gabor_radius = cfg.gabor_radius;
    SynthParams params = cfg.synth;
    params.seed = cfg.seed;
    data = build_training_set(synth_fingers, params, pipeline, cfg.lda_dim + 1);
  }
  const SubspaceTransform transform = train(data, cfg.pca_dim, cfg.lda_dim);
  save_transform(output, transform);
  std::printf("trained %d -> %d -> %d transform on %zu jets -> %s\n", transform.input_dim,
              transform.pca_dim, transform.out_dim, data.jets.size(), output.c_str());
  return 0;
}

int run_match(const Config& cfg, const std::string& a_path, const std::string& b_path) {
  const Template a = load_template(a_path);
  const Template b = load_template(b_path);
  const MatchResult r = match(a, b, cfg.match);
  std::printf("%.6f\t%.6f\t%.6f\t%zu\n", r.sim1, r.sim2, r.sim, r.pairs.size());
  return 0;
}

int run_eval(const Config& cfg, const std::string& db_dir, const std::string& transform_path,
             const std::string& out_dir) {
  const SubspaceTransform transform = load_transform(transform_path);
  const GaborBank bank = build_bank(cfg.gabor_sigma, cfg.gabor_kmax);
  const auto by_finger = scan_db_dir(db_dir);
  std::vector<FingerSet> db;
  for (const auto& [finger, files] : by_finger) {
    FingerSet set;
    set.id = finger;
    for (const fs::path& file : files)
      set.impressions.push_back(make_template(read_image(file.string()), cfg, bank, transform));
    db.push_back(std::move(set));
  }
  const ExperimentReport report =
      run_experiment(db, cfg.match, cfg.eval_far_target, {1, 2, 3, 4, 5});
  write_report_files(out_dir, report);
  for (const SystemMetrics& m : report.systems)
    std::printf("%-10s EER %.4f%%  FRR(FAR=%g%%) %.4f%%\n", m.name.c_str(), 100 * m.eer,
                100 * report.far_target, 100 * m.frr.frr);
  std::printf("report in %s\n", out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fingerprint minutia descriptor toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed_override = 0;
  bool seed_set = false;
  app.add_option("--config", config_path, "config file (flat key = value)");
  app.add_option("--seed", seed_override, "override the config seed")->each([&](const std::string&) {
    seed_set = true;
  });

  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic fingerprint database");
  std::string synth_out = "synth_db";
  int synth_fingers = 10;
  synth_cmd->add_option("-o,--out", synth_out, "output directory");
  synth_cmd->add_option("--fingers", synth_fingers, "number of fingers");

  auto* enhance_cmd = app.add_subcommand("enhance", "write the enhanced image as PGM");
  std::string enh_in, enh_out = "enhanced.pgm";
  enhance_cmd->add_option("input", enh_in, "input image (PGM/PNG)")->required();
  enhance_cmd->add_option("-o,--out", enh_out, "output PGM");

  auto* extract_cmd = app.add_subcommand("extract", "image -> minutia template");
  std::string ext_in, ext_transform, ext_out = "out.tpl", ext_dump;
  extract_cmd->add_option("input", ext_in, "input image (PGM/PNG)")->required();
  extract_cmd->add_option("-t,--transform", ext_transform, "trained transform file")->required();
  extract_cmd->add_option("-o,--out", ext_out, "output template");
  extract_cmd->add_option("--dump-enhanced", ext_dump, "also write the enhanced image here");

  auto* train_cmd = app.add_subcommand("train", "train the PCA+LDA transform");
  std::string train_db, train_out = "transform.mdsc";
  int train_fingers = 40;
  train_cmd->add_option("--db", train_db, "directory of images + .gt.json ground truth");
  train_cmd->add_option("--synth-fingers", train_fingers,
                        "train on this many generated fingers (when --db is absent)");
  train_cmd->add_option("-o,--out", train_out, "output transform file");

  auto* match_cmd = app.add_subcommand("match", "match two templates");
  std::string match_a, match_b;
  match_cmd->add_option("enroll", match_a, "enrollment template")->required();
  match_cmd->add_option("test", match_b, "test template")->required();

  auto* eval_cmd = app.add_subcommand("eval", "FVC-style evaluation over a database directory");
  std::string eval_db, eval_transform, eval_out = "eval_out";
  eval_cmd->add_option("--db", eval_db, "database directory")->required();
  eval_cmd->add_option("-t,--transform", eval_transform, "trained transform file")->required();
  eval_cmd->add_option("-o,--out", eval_out, "output directory for report files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help() << std::flush;
    return 1;
  }

  try {
    Config cfg = config_path.empty() ? config_from_env() : load_config(config_path);
    if (seed_set) cfg.seed = seed_override;
    cfg.validate();
    if (synth_cmd->parsed()) return run_synth(cfg, synth_out, synth_fingers);
    if (enhance_cmd->parsed()) return run_enhance(cfg, enh_in, enh_out);
    if (extract_cmd->parsed()) return run_extract(cfg, ext_in, ext_transform, ext_out, ext_dump);
    if (train_cmd->parsed()) return run_train(cfg, train_db, train_fingers, train_out);
    if (match_cmd->parsed()) return run_match(cfg, match_a, match_b);
    if (eval_cmd->parsed()) return run_eval(cfg, eval_db, eval_transform, eval_out);
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
