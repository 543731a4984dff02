#include "qcorr/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "qcorr/io.hpp"

namespace qcorr::cli {

namespace {

constexpr const char* kSchema = "qcorr/1";

DivergenceKind parse_kind(const std::string& s) {
  if (s == "vn") return DivergenceKind::vn();
  if (s == "dmax") return DivergenceKind::dmax();
  if (s == "dfid") return DivergenceKind::dfid();
  if (s.rfind("renyi:", 0) == 0)
    return DivergenceKind::renyi(std::stod(s.substr(6)));
  throw RangeError("unknown divergence kind '" + s +
                   "' (expected vn, renyi:alpha, dmax, dfid)");
}

std::vector<int> parse_dims(const std::string& s) {
  std::vector<int> dims;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t next = s.find('x', pos);
    if (next == std::string::npos) next = s.size();
    dims.push_back(std::stoi(s.substr(pos, next - pos)));
    pos = next + 1;
  }
  if (dims.empty()) throw RangeError("empty --dims");
  for (int d : dims)
    if (d < 1) throw RangeError("dims must be positive");
  return dims;
}

void emit(const Json& report, const std::string& format, std::ostream& out) {
  if (format == "table") {
    size_t width = 0;
    for (auto it = report.begin(); it != report.end(); ++it)
      width = std::max(width, it.key().size());
    for (auto it = report.begin(); it != report.end(); ++it) {
      out << std::left << std::setw(static_cast<int>(width) + 2) << it.key();
      if (it.value().is_string())
        out << it.value().get<std::string>();
      else
        out << it.value().dump();
      out << "\n";
    }
  } else {
    out << report.dump(2) << "\n";
  }
}

Json base_report(const std::string& verb) {
  Json j;
  j["schema"] = kSchema;
  j["verb"] = verb;
  return j;
}

// Deterministic random PVM on dimension d with m outcomes (ranks spread as
// evenly as the random split allows).
Pvm random_pvm(int d, int m, Rng& rng) {
  if (m > d) throw RangeError("gen: register dim exceeds system dim");
  std::vector<int> ranks(m, 1);
  std::uniform_int_distribution<int> pick(0, m - 1);
  for (int extra = 0; extra < d - m; ++extra) ++ranks[pick(rng)];
  Mat u = random_unitary(d, rng);
  Pvm pvm;
  int col = 0;
  for (int j = 0; j < m; ++j) {
    Mat p = Mat::Zero(d, d);
    for (int r = 0; r < ranks[j]; ++r) {
      p += u.col(col) * u.col(col).adjoint();
      ++col;
    }
    pvm.projectors.push_back(p);
  }
  return pvm;
}

DensityOperator generate_state(const std::string& kind,
                               const std::vector<int>& dims, int rank,
                               std::uint64_t seed) {
  Rng rng(seed);
  if (kind == "random") {
    int r = rank > 0 ? rank : product(dims);
    return random_state(dims, r, rng);
  }
  if (kind == "pure") return random_pure(dims, rng);
  if (kind == "mes") {
    if (dims.size() != 2 || dims[0] != dims[1])
      throw RangeError("gen mes: dims must be dxd");
    const int d = dims[0];
    Vec ket = Vec::Zero(d * d);
    for (int i = 0; i < d; ++i) ket(i * d + i) = 1.0 / std::sqrt(double(d));
    return pure_state(ket, dims);
  }
  if (kind == "cc") {
    if (dims.size() != 2) throw RangeError("gen cc: dims must be AxB");
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    Mat m = Mat::Zero(product(dims), product(dims));
    double total = 0.0;
    std::vector<double> p(product(dims));
    for (double& x : p) {
      x = uni(rng);
      total += x;
    }
    for (int i = 0; i < product(dims); ++i) m(i, i) = p[i] / total;
    return make_density(m, dims);
  }
  if (kind == "premeasurement") {
    if (dims.size() != 2) throw RangeError("gen premeasurement: dims AxB");
    const int m = dims[0], d = dims[1];
    Pvm pvm = random_pvm(d, m, rng);
    Mat w = random_unitary(m, rng);
    DensityOperator sigma =
        random_state({d}, rank > 0 ? rank : d, rng);
    PremeasurementState pm = premeasure(sigma, build_isometry(w, pvm));
    return pm.state;
  }
  throw RangeError("gen: unknown state kind '" + kind + "'");
}

struct CommonFlags {
  std::string state_file;
  std::string dims = "2x2";
  std::string kind = "vn";
  double epsilon = 0.0;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out_file;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"quantum correlation hierarchy toolkit"};
  app.require_subcommand(1);
  CommonFlags f;

  auto add_common = [&](CLI::App* sub, bool needs_state) {
    if (needs_state)
      sub->add_option("--state", f.state_file, "state JSON file")->required();
    sub->add_option("--kind", f.kind, "divergence kind: vn|renyi:a|dmax|dfid");
    sub->add_option("--epsilon", f.epsilon, "smoothing epsilon");
    sub->add_option("--tol", f.tol, "certification tolerance");
    sub->add_option("--seed", f.seed, "deterministic seed");
    sub->add_option("--format", f.format, "json|table")
        ->check(CLI::IsMember({"json", "table"}));
    sub->add_option("-o,--output", f.out_file, "write the report to a file");
  };

  auto* gen = app.add_subcommand("gen", "generate a state file");
  std::string gen_kind = "random";
  int gen_rank = 0;
  gen->add_option("--dims", f.dims, "subsystem dims, e.g. 2x2");
  gen->add_option("--kind", gen_kind,
                  "random|pure|mes|cc|premeasurement");
  gen->add_option("--rank", gen_rank, "rank (0 = full)");
  gen->add_option("--seed", f.seed, "deterministic seed");
  gen->add_option("-o,--output", f.out_file, "output state file")->required();

  auto* measure = app.add_subcommand("measure", "evaluate one measure");
  std::string measure_name = "ic";
  std::string gen_q = "Delta2";
  measure->add_option("--name", measure_name,
                      "ic|ebracket|delta1|delta1b|delta2|discord1|discord1b|"
                      "discord2|gendiscord");
  measure->add_option("--q", gen_q, "Q for gendiscord: Delta2|delta2|ebracket");
  add_common(measure, true);

  auto* hierarchy = app.add_subcommand("hierarchy", "full hierarchy table");
  add_common(hierarchy, true);

  auto* collapse = app.add_subcommand("collapse-check",
                                      "Theorem-2/4 collapse certificate");
  add_common(collapse, true);

  auto* smooth_collapse = app.add_subcommand(
      "smooth-collapse-check", "Theorem-6 certificate over the restricted ball");
  std::string family = "max";
  smooth_collapse->add_option("--family", family, "max|fid")
      ->check(CLI::IsMember({"max", "fid"}));
  add_common(smooth_collapse, true);

  auto* eur = app.add_subcommand("eur-check", "entropic uncertainty relation");
  std::string relation = "berta";
  eur->add_option("--relation", relation, "berta|tomren|tomren-smooth|sanchez")
      ->check(CLI::IsMember({"berta", "tomren", "tomren-smooth", "sanchez"}));
  add_common(eur, true);

  auto* ecr = app.add_subcommand("ecr-check",
                                 "entanglement-complementarity view");
  std::string ecr_relation = "plain";
  ecr->add_option("--relation", ecr_relation, "plain|smooth")
      ->check(CLI::IsMember({"plain", "smooth"}));
  add_common(ecr, true);

  auto* game = app.add_subcommand("game", "7.2 distillation game");
  std::string layout = "pure";
  int rounds = 1;
  std::string csv_file;
  game->add_option("--layout", layout, "pure|memory|adversarial")
      ->check(CLI::IsMember({"pure", "memory", "adversarial"}));
  game->add_option("--rounds", rounds, "rounds per PVM");
  game->add_option("--csv", csv_file, "write per-round yields as CSV");
  add_common(game, true);

  auto* petz = app.add_subcommand("petz-check", "Petz recovery round-trip");
  add_common(petz, true);

  auto* classes = app.add_subcommand("class-check", "state class membership");
  add_common(classes, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help
      out << app.help() << "\n";
      return 0;
    }
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  auto deliver = [&](const Json& report) {
    if (!f.out_file.empty() && app.got_subcommand(gen) == false) {
      std::ofstream file(f.out_file);
      file << report.dump(2) << "\n";
    }
    emit(report, f.format, out);
  };

  try {
    if (app.got_subcommand(gen)) {
      DensityOperator rho =
          generate_state(gen_kind, parse_dims(f.dims), gen_rank, f.seed);
      save_state(rho, f.out_file);
      Json report = base_report("gen");
      report["kind"] = gen_kind;
      report["dims"] = rho.dims;
      report["seed"] = f.seed;
      report["output"] = f.out_file;
      emit(report, f.format, out);
      return 0;
    }

    DensityOperator rho = load_state(f.state_file);

    if (app.got_subcommand(measure)) {
      Json report = base_report("measure");
      DivergenceKind kind = parse_kind(f.kind);
      SearchOptions sopts;
      sopts.seed = f.seed;
      MeasureReport rep;
      if (measure_name == "ic") {
        rep.name = "Ic";
        rep.lower = rep.upper =
            -cond_entropy(DivergenceKind::vn(), rho, 1).value;
        rep.exact = true;
        rep.provenance = "closed_form";
      } else if (measure_name == "ebracket") {
        rep = entanglement_bracket(kind, rho, sopts);
      } else if (measure_name == "delta1") {
        rep = delta_one_way(kind, rho, Side::A, sopts);
      } else if (measure_name == "delta1b") {
        rep = delta_one_way(kind, rho, Side::B, sopts);
      } else if (measure_name == "delta2") {
        rep = delta_two_way(kind, rho, sopts);
      } else if (measure_name == "discord1") {
        rep = discord_delta(rho, DiscordScope::one_way_a,
                            PovmMode::projective_rank1, sopts);
      } else if (measure_name == "discord1b") {
        rep = discord_delta(rho, DiscordScope::one_way_b,
                            PovmMode::projective_rank1, sopts);
      } else if (measure_name == "discord2") {
        rep = discord_delta(rho, DiscordScope::two_way,
                            PovmMode::projective_rank1, sopts);
      } else if (measure_name == "gendiscord") {
        rep = generalized_discord(rho, gen_q, sopts);
      } else {
        err << "usage error: unknown measure '" << measure_name << "'\n";
        return 2;
      }
      report["measure"] = measure_report_to_json(rep);
      report["value"] = rep.value();
      report["tol"] = f.tol;
      deliver(report);
      return 0;
    }

    if (app.got_subcommand(hierarchy)) {
      Json report = base_report("hierarchy");
      SearchOptions sopts;
      sopts.seed = f.seed;
      Json entries = Json::array();
      for (const MeasureReport& rep :
           hierarchy_table(rho, parse_kind(f.kind), sopts))
        entries.push_back(measure_report_to_json(rep));
      report["entries"] = std::move(entries);
      deliver(report);
      return 0;
    }

    if (app.got_subcommand(collapse)) {
      Json report = base_report("collapse-check");
      CondEntropyOptions eopts;
      eopts.seed = f.seed;
      CollapseCertificate cert =
          certify_collapse(rho, parse_kind(f.kind), f.tol, eopts,
                           f.state_file);
      report["certificate"] = certificate_to_json(cert);
      deliver(report);
      return cert.applicable && cert.collapsed ? 0 : 1;
    }

    if (app.got_subcommand(smooth_collapse)) {
      Json report = base_report("smooth-collapse-check");
      StateClassVerdict mq = is_mq(rho, kClassTol);
      if (!mq.member) {
        err << "check failed: state is not MQ\n";
        return 1;
      }
      const MqWitness& w = *mq.mq_witness;
      Pvm pvm{w.projectors};
      PremeasurementState pm =
          premeasure(DensityOperator{w.sigma, {rho.dims[1]}, rho.trace_mode},
                     build_isometry(w.basis_w, pvm));
      SmoothOptions sopts;
      sopts.seed = f.seed;
      CollapseCertificate cert = certify_smooth_collapse(
          pm, f.epsilon,
          f.tol,
          family == "max" ? SmoothFamily::dmax_family
                          : SmoothFamily::dfid_family,
          sopts);
      report["certificate"] = certificate_to_json(cert);
      report["epsilon"] = f.epsilon;
      deliver(report);
      return cert.collapsed ? 0 : 1;
    }

    if (app.got_subcommand(eur)) {
      Json report = base_report("eur-check");
      EurInstance inst;
      inst.rho = rho;
      inst.epsilon = f.epsilon;
      EurRelation rel;
      if (relation == "berta") {
        rel = EurRelation::berta_eq64;
        inst.basis_w = Mat::Identity(rho.dims[0], rho.dims[0]);
      } else if (relation == "sanchez") {
        rel = EurRelation::sanchez_triple;
        inst.povms = {Povm{pauli_pvm('x').projectors},
                      Povm{pauli_pvm('y').projectors},
                      Povm{pauli_pvm('z').projectors}};
      } else {
        rel = relation == "tomren" ? EurRelation::tomren_eq56
                                   : EurRelation::tomren_smooth_eq58;
        if (rho.dims.size() != 3) {
          err << "usage error: tomren relations need dims [dS,dE1,dE2]\n";
          return 2;
        }
        const int ds = rho.dims[0];
        Mat comp = Mat::Identity(ds, ds);
        inst.povms = {Povm{basis_pvm(comp).projectors},
                      Povm{basis_pvm(fourier_basis(comp)).projectors}};
      }
      SmoothOptions sopts;
      sopts.seed = f.seed;
      EurCheck check = check_eur(rel, inst, sopts);
      report["check"] = eur_check_to_json(check);
      deliver(report);
      return check.pass ? 0 : 1;
    }

    if (app.got_subcommand(ecr)) {
      Json report = base_report("ecr-check");
      if (rho.dims.size() != 3) {
        err << "usage error: ecr-check needs dims [dS,dE1,dE2]\n";
        return 2;
      }
      const int ds = rho.dims[0];
      Mat comp = Mat::Identity(ds, ds);
      Povm x{basis_pvm(comp).projectors};
      Povm z{basis_pvm(fourier_basis(comp)).projectors};
      SmoothOptions sopts;
      sopts.seed = f.seed;
      EurCheck check =
          ecr_view(ecr_relation == "plain" ? EcrRelation::eq57
                                           : EcrRelation::eq59,
                   rho, x, z, f.epsilon, sopts);
      report["check"] = eur_check_to_json(check);
      deliver(report);
      return check.pass ? 0 : 1;
    }

    if (app.got_subcommand(game)) {
      Json report = base_report("game");
      GameLayout gl = layout == "pure" ? GameLayout::pure_system
                      : layout == "memory" ? GameLayout::with_memory_split
                                           : GameLayout::adversarial_env;
      std::vector<Pvm> strategy = {pauli_pvm('x'), pauli_pvm('y'),
                                   pauli_pvm('z')};
      GameRecord rec = play_game(rho, gl, strategy, rounds);
      report["record"] = game_record_to_json(rec);
      if (!csv_file.empty()) {
        std::ofstream csv(csv_file);
        csv << "pvm_index,yield_bits\n";
        for (size_t i = 0; i < rec.per_round_yield.size(); ++i)
          csv << i << "," << std::setprecision(17) << rec.per_round_yield[i]
              << "\n";
      }
      deliver(report);
      bool ok = !rec.bound_applicable || rec.total_yield >= rec.bound - f.tol;
      return ok ? 0 : 1;
    }

    if (app.got_subcommand(petz)) {
      Json report = base_report("petz-check");
      if (rho.dims.size() != 1) {
        err << "usage error: petz-check expects a single-system state\n";
        return 2;
      }
      Mat z = Mat::Identity(rho.dim(), rho.dim());
      PetzMap map = petz_map(rho.mat, z);
      double residual = (map.apply(map.channel(rho.mat)) - rho.mat).norm();
      report["residual"] = residual;
      report["tol"] = 1e-10;
      report["pass"] = residual < 1e-10;
      deliver(report);
      return residual < 1e-10 ? 0 : 1;
    }

    if (app.got_subcommand(classes)) {
      Json report = base_report("class-check");
      report["dims"] = rho.dims;
      report["pure"] = rho.is_pure();
      if (rho.dims.size() == 2) {
        StateClassVerdict cq = is_cq(rho, Side::A, f.tol);
        StateClassVerdict qc = is_cq(rho, Side::B, f.tol);
        StateClassVerdict cc = is_cc(rho, f.tol);
        StateClassVerdict sep = is_separable_small(rho, f.tol);
        StateClassVerdict mq = is_mq(rho, f.tol);
        report["cq"] = cq.member;
        report["qc"] = qc.member;
        report["cc"] = cc.member;
        report["sep"] =
            sep.inconclusive ? Json("inconclusive-lean-Sep")
                             : Json(sep.cls == StateClass::Sep && sep.member);
        report["ppt_min_eig"] = sep.gap;
        report["mq"] = mq.member;
        report["tol"] = f.tol;
      }
      deliver(report);
      return 0;
    }
  } catch (const nlohmann::json::parse_error& e) {
    err << "input error: malformed JSON: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace qcorr::cli
