// rigidity-lab: generate polytopes, decide infinitesimal rigidity, and run
// inversion-certificate audits on velocity fields.
//
// Exit codes: 0 success / rigid / pass, 2 flexible, 3 invalid input,
// 4 audit violation or inadmissible field.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "riglab/riglab.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFlexible = 2;
constexpr int kExitInvalid = 3;
constexpr int kExitViolation = 4;

struct Options {
  std::string mesh_path;
  std::string field_path;
  std::string out = "-";
  std::string format = "dot";
  std::string basis_out;
  std::vector<int> base;
  bool exact = false;
  std::uint64_t seed = 0;
  long trials = 1000;
  riglab::ToleranceConfig tolerances;
  std::vector<std::string> params;
};

void add_tolerance_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--eps-sign", opt.tolerances.eps_sign, "relative sign/zero tolerance");
  cmd->add_option("--eps-rank", opt.tolerances.eps_rank, "relative singular value cutoff");
  cmd->add_option("--eps-convex", opt.tolerances.eps_convex, "relative convexity margin");
}

void add_base_flag(CLI::App* cmd, Options& opt) {
  cmd->add_option("--base", opt.base, "base triangle as three vertex ids (default: face 0)")->expected(3);
}

void write_text(const std::string& out, const std::string& text) {
  if (out == "-") {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream stream(out);
  if (!stream) throw riglab::Error(riglab::ErrorCode::ParseError, "cannot write '" + out + "'");
  stream << text;
  if (text.empty() || text.back() != '\n') stream << '\n';
}

template <typename Scalar>
riglab::SimplicialPolytope<Scalar> load_polytope(const Options& opt) {
  riglab::GeneralPolytope<Scalar> gp = riglab::read_off_file<Scalar>(opt.mesh_path);
  return riglab::triangulate_faces(gp, opt.tolerances);
}

template <typename Scalar>
Eigen::Vector3i resolve_base(const Options& opt, const riglab::SimplicialPolytope<Scalar>& p) {
  if (opt.base.empty()) return p.faces.row(0).transpose();
  return Eigen::Vector3i(opt.base[0], opt.base[1], opt.base[2]);
}

riglab::GenerateSpec parse_generate_params(const Options& opt) {
  if (opt.params.empty()) throw riglab::Error(riglab::ErrorCode::BadParameter, "missing polytope kind");
  riglab::GenerateSpec spec;
  spec.kind = riglab::kind_from_name(opt.params[0]);
  spec.seed = opt.seed;
  auto want = [&](std::size_t count, const char* usage) {
    if (opt.params.size() != count)
      throw riglab::Error(riglab::ErrorCode::BadParameter, std::string("usage: generate ") + usage);
  };
  switch (spec.kind) {
    case riglab::PolytopeKind::Tetrahedron:
    case riglab::PolytopeKind::Octahedron:
    case riglab::PolytopeKind::Icosahedron:
      want(1, "<tetrahedron|octahedron|icosahedron>");
      break;
    case riglab::PolytopeKind::Bipyramid:
      want(2, "bipyramid <ring-size>");
      spec.size = std::stoi(opt.params[1]);
      break;
    case riglab::PolytopeKind::RandomSphere:
      want(2, "random_sphere <point-count> [--seed S]");
      spec.size = std::stoi(opt.params[1]);
      break;
    case riglab::PolytopeKind::FlatVertex: {
      if (opt.params.size() < 3)
        throw riglab::Error(riglab::ErrorCode::BadParameter, "usage: flat_vertex <host> [host-size] <face>");
      spec.host_kind = riglab::kind_from_name(opt.params[1]);
      if (spec.host_kind == riglab::PolytopeKind::Bipyramid) {
        want(4, "flat_vertex bipyramid <ring-size> <face>");
        spec.host_size = std::stoi(opt.params[2]);
        spec.face = std::stoi(opt.params[3]);
      } else {
        want(3, "flat_vertex <host> <face>");
        spec.face = std::stoi(opt.params[2]);
      }
      break;
    }
  }
  return spec;
}

int cmd_generate(const Options& opt) {
  riglab::GenerateSpec spec = parse_generate_params(opt);
  riglab::SimplicialPolytope<double> p = riglab::generate<double>(spec, opt.tolerances);
  std::ostringstream off;
  riglab::write_off(off, p);
  write_text(opt.out, off.str());
  std::cerr << "n=" << p.vertex_count() << " E=" << p.edge_count() << " F=" << p.face_count()
            << " strict=" << (p.strict ? "true" : "false") << "\n";
  return kExitOk;
}

template <typename Scalar>
int run_validate(const Options& opt) {
  riglab::GeneralPolytope<Scalar> gp = riglab::read_off_file<Scalar>(opt.mesh_path);
  bool already_triangles = true;
  for (const auto& cycle : gp.faces) already_triangles &= cycle.size() == 3;
  riglab::SimplicialPolytope<Scalar> p = riglab::triangulate_faces(gp, opt.tolerances);
  riglab::json report{{"schema", 1},
                      {"valid", true},
                      {"exact", !riglab::is_floating_mode<Scalar>},
                      {"vertices", p.vertex_count()},
                      {"edges", p.edge_count()},
                      {"faces", p.face_count()},
                      {"strict", p.strict},
                      {"triangulated", !already_triangles},
                      {"diameter", p.diameter}};
  write_text(opt.out, report.dump(2));
  return kExitOk;
}

template <typename Scalar>
int run_rigidity(const Options& opt) {
  riglab::SimplicialPolytope<Scalar> p = load_polytope<Scalar>(opt);
  Eigen::Vector3i base = resolve_base(opt, p);
  riglab::RigidityAssessment<Scalar> assessment = riglab::is_infinitesimally_rigid(p, base, opt.tolerances);
  riglab::json report{{"schema", 1},
                      {"exact", !riglab::is_floating_mode<Scalar>},
                      {"vertices", p.vertex_count()},
                      {"edges", p.edge_count()},
                      {"faces", p.face_count()},
                      {"strict", p.strict},
                      {"base", {base(0), base(1), base(2)}},
                      {"full_kernel_dimension", assessment.full.dimension},
                      {"planted_kernel_dimension", assessment.planted.dimension},
                      {"verdict", assessment.rigid ? "rigid" : "flexible"}};
  auto gap_json = [](const std::optional<double>& gap) -> riglab::json {
    if (!gap) return nullptr;
    if (std::isinf(*gap)) return "inf";
    return *gap;
  };
  report["full_gap_ratio"] = gap_json(assessment.full.singular_value_gap);
  report["planted_gap_ratio"] = gap_json(assessment.planted.singular_value_gap);
  if (!assessment.rigid) {
    riglab::json witness = riglab::field_to_json(riglab::field_to_doubles<Scalar>(*assessment.witness));
    report["witness"] = witness;
    std::string witness_path =
        opt.out == "-" ? std::string("rigidity-witness.json") : opt.out + ".witness.json";
    write_text(witness_path, witness.dump(2));
    report["witness_path"] = witness_path;
  }
  if (!opt.basis_out.empty())
    write_text(opt.basis_out, riglab::motion_basis_to_json(assessment.full).dump(2));
  write_text(opt.out, report.dump(2));
  return assessment.rigid ? kExitOk : kExitFlexible;
}

template <typename Scalar>
int run_certify(const Options& opt) {
  riglab::SimplicialPolytope<Scalar> p = load_polytope<Scalar>(opt);
  std::ifstream stream(opt.field_path);
  if (!stream) throw riglab::Error(riglab::ErrorCode::ParseError, "cannot open '" + opt.field_path + "'");
  riglab::json j = riglab::json::parse(stream, nullptr, false);
  if (j.is_discarded()) throw riglab::Error(riglab::ErrorCode::ParseError, "invalid JSON in '" + opt.field_path + "'");
  riglab::VelocityField<Scalar> field = riglab::field_from_json<Scalar>(j);
  Eigen::Vector3i base = resolve_base(opt, p);
  riglab::AuditReport report = riglab::global_audit(p, field, base, opt.tolerances);
  write_text(opt.out, riglab::audit_report_to_json(report).dump(2));
  const bool ok = report.verdict == riglab::AuditVerdict::AllDead || report.verdict == riglab::AuditVerdict::Pass;
  return ok ? kExitOk : kExitViolation;
}

int run_fuzz(const Options& opt) {
  if (opt.trials < 1) throw riglab::Error(riglab::ErrorCode::BadParameter, "--trials must be at least 1");
  riglab::SimplicialPolytope<double> p = load_polytope<double>(opt);
  Eigen::Vector3i base = resolve_base(opt, p);
  riglab::RigidityMatrix<double> rm = riglab::rigidity_matrix(p);
  riglab::MotionBasis<double> full = riglab::kernel(rm, opt.tolerances);
  riglab::MotionBasis<double> planted = riglab::kernel(riglab::plant(rm, base), opt.tolerances);

  struct FamilyStats {
    long trials = 0, admissible = 0, mixed = 0, planted = 0;
    std::map<std::string, long> verdicts;
  };
  std::map<std::string, FamilyStats> families;
  long lemma_violations = 0;
  riglab::json examples = riglab::json::array();

  for (long trial = 0; trial < opt.trials; ++trial) {
    riglab::detail::GaussianSource gauss(riglab::detail::mix_seed(opt.seed, static_cast<std::uint64_t>(trial)));
    const char* family = "gaussian";
    riglab::VelocityField<double> field(p.vertex_count(), 3);
    switch (trial % 3) {
      case 0: {
        for (int i = 0; i < field.rows(); ++i)
          for (int c = 0; c < 3; ++c) field(i, c) = gauss();
        break;
      }
      case 1: {
        family = "kernel";
        field.setZero();
        for (const auto& b : full.basis) field += gauss() * b;
        break;
      }
      default: {
        family = "planted_kernel";
        riglab::VelocityField<double> restricted(static_cast<int>(planted.vertex_ids.size()), 3);
        restricted.setZero();
        for (const auto& b : planted.basis) restricted += gauss() * b;
        field = riglab::expand_field(restricted, planted.vertex_ids, p.vertex_count());
        break;
      }
    }
    FamilyStats& stats = families[family];
    ++stats.trials;
    riglab::AuditReport report = riglab::global_audit(p, field, base, opt.tolerances);
    if (!report.admissible) {
      ++stats.mixed;
      continue;
    }
    ++stats.admissible;
    stats.planted += report.planted;
    ++stats.verdicts[riglab::name(report.verdict)];
    const bool violation = report.verdict == riglab::AuditVerdict::TriangleFloorViolation ||
                           report.verdict == riglab::AuditVerdict::VertexCapViolation ||
                           report.verdict == riglab::AuditVerdict::CountingContradiction;
    if (violation) {
      ++lemma_violations;
      if (examples.size() < 10)
        examples.push_back({{"trial", trial},
                            {"family", family},
                            {"verdict", riglab::name(report.verdict)},
                            {"detail", report.detail}});
    }
  }

  riglab::json summary{{"schema", 1},
                       {"seed", opt.seed},
                       {"trials", opt.trials},
                       {"strict", p.strict},
                       {"full_kernel_dimension", full.dimension},
                       {"planted_kernel_dimension", planted.dimension},
                       {"lemma_violations", lemma_violations},
                       {"violation_examples", examples},
                       {"families", riglab::json::object()}};
  for (const auto& [name, stats] : families) {
    riglab::json verdicts = riglab::json::object();
    for (const auto& [verdict, count] : stats.verdicts) verdicts[verdict] = count;
    summary["families"][name] = {{"trials", stats.trials},
                                 {"admissible", stats.admissible},
                                 {"mixed_signs", stats.mixed},
                                 {"planted", stats.planted},
                                 {"verdicts", verdicts}};
  }
  write_text(opt.out, summary.dump(2));
  return (p.strict && lemma_violations > 0) ? kExitViolation : kExitOk;
}

template <typename Scalar>
int run_export(const Options& opt) {
  if (opt.format != "dot") throw riglab::Error(riglab::ErrorCode::BadParameter, "only --format dot is supported");
  riglab::SimplicialPolytope<Scalar> p = load_polytope<Scalar>(opt);
  std::ifstream stream(opt.field_path);
  if (!stream) throw riglab::Error(riglab::ErrorCode::ParseError, "cannot open '" + opt.field_path + "'");
  riglab::json j = riglab::json::parse(stream, nullptr, false);
  if (j.is_discarded()) throw riglab::Error(riglab::ErrorCode::ParseError, "invalid JSON in '" + opt.field_path + "'");
  riglab::VelocityField<Scalar> field = riglab::field_from_json<Scalar>(j);
  riglab::ClassifyResult classified = riglab::classify_edges(p, field, opt.tolerances);
  if (!classified.admissible())
    throw riglab::Error(riglab::ErrorCode::BadParameter,
                        "field is not admissible; projections disagree on edge " +
                            std::to_string(classified.mixed->edge));
  write_text(opt.out, riglab::dot_export(*classified.graph));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rigidity-lab: infinitesimal rigidity and inversion-certificate workbench"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* generate = app.add_subcommand("generate", "generate a polytope and write it as OFF");
  generate->add_option("params", opt.params, "kind and its parameters")->expected(-1);
  generate->add_option("--seed", opt.seed, "random seed");
  generate->add_option("--out", opt.out, "output path ('-' = stdout)");
  add_tolerance_flags(generate, opt);

  CLI::App* validate = app.add_subcommand("validate", "validate an OFF file");
  validate->add_option("mesh", opt.mesh_path, "OFF file")->required();
  validate->add_flag("--exact", opt.exact, "exact rational arithmetic");
  validate->add_option("--out", opt.out, "output path ('-' = stdout)");
  add_tolerance_flags(validate, opt);

  CLI::App* rigidity = app.add_subcommand("rigidity", "decide infinitesimal rigidity");
  rigidity->add_option("mesh", opt.mesh_path, "OFF file")->required();
  rigidity->add_flag("--exact", opt.exact, "exact rational arithmetic");
  rigidity->add_option("--out", opt.out, "output path ('-' = stdout)");
  rigidity->add_option("--basis", opt.basis_out, "also write the full kernel basis as JSON");
  add_base_flag(rigidity, opt);
  add_tolerance_flags(rigidity, opt);

  CLI::App* certify = app.add_subcommand("certify", "audit a velocity field");
  certify->add_option("mesh", opt.mesh_path, "OFF file")->required();
  certify->add_option("field", opt.field_path, "velocity field JSON")->required();
  certify->add_flag("--exact", opt.exact, "exact rational arithmetic");
  certify->add_option("--out", opt.out, "output path ('-' = stdout)");
  add_base_flag(certify, opt);
  add_tolerance_flags(certify, opt);

  CLI::App* fuzz = app.add_subcommand("fuzz", "sample random fields and tabulate audit outcomes");
  fuzz->add_option("mesh", opt.mesh_path, "OFF file")->required();
  fuzz->add_option("--trials", opt.trials, "number of trials");
  fuzz->add_option("--seed", opt.seed, "random seed");
  fuzz->add_option("--out", opt.out, "output path ('-' = stdout)");
  add_base_flag(fuzz, opt);
  add_tolerance_flags(fuzz, opt);

  CLI::App* exporter = app.add_subcommand("export", "export the orientation graph of a field");
  exporter->add_option("mesh", opt.mesh_path, "OFF file")->required();
  exporter->add_option("field", opt.field_path, "velocity field JSON")->required();
  exporter->add_option("--format", opt.format, "output format (dot)");
  exporter->add_flag("--exact", opt.exact, "exact rational arithmetic");
  exporter->add_option("--out", opt.out, "output path ('-' = stdout)");
  add_tolerance_flags(exporter, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (generate->parsed()) return cmd_generate(opt);
    if (validate->parsed()) return opt.exact ? run_validate<riglab::Rational>(opt) : run_validate<double>(opt);
    if (rigidity->parsed()) return opt.exact ? run_rigidity<riglab::Rational>(opt) : run_rigidity<double>(opt);
    if (certify->parsed()) return opt.exact ? run_certify<riglab::Rational>(opt) : run_certify<double>(opt);
    if (fuzz->parsed()) return run_fuzz(opt);
    if (exporter->parsed()) return opt.exact ? run_export<riglab::Rational>(opt) : run_export<double>(opt);
  } catch (const riglab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
