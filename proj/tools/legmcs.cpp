#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "legmcs/json_io.hpp"

namespace {

using legmcs::Json;

struct Options {
  std::int64_t prime = 2;
  int baseline = 1;
  long long search_bound = 1'000'000;
  long long branch_cap = 10'000'000;
  std::string out;
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--prime", opt.prime, "prime field modulus")->capture_default_str();
  cmd->add_option("--baseline", opt.baseline, "Maslov potential baseline")->capture_default_str();
  cmd->add_option("--search-bound", opt.search_bound,
                  "cap on the isomorphism search space size")
      ->capture_default_str();
  cmd->add_option("--branch-cap", opt.branch_cap, "cap on enumeration branches")
      ->capture_default_str();
  cmd->add_option("--out", opt.out, "write the JSON report to this path");
}

int emit(const Json& j, const Options& opt, int code) {
  if (opt.out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream f(opt.out);
    if (!f) {
      std::cerr << "cannot write " << opt.out << "\n";
      return 2;
    }
    f << j.dump(2) << "\n";
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"legmcs: sheaf-theoretic invariants of Legendrian links from plat fronts"};
  app.require_subcommand(1);

  Options opt;
  std::string file_a, file_b, move_kind = "far";
  int move_at = 0;

  auto* front_validate = app.add_subcommand("front-validate", "parse and validate a front file");
  front_validate->add_option("file", file_a)->required();
  add_common(front_validate, opt);

  auto* front_invariants =
      app.add_subcommand("front-invariants", "tb, rotation numbers, component count");
  front_invariants->add_option("file", file_a)->required();
  add_common(front_invariants, opt);

  auto* front_move = app.add_subcommand("front-move", "apply a far-commutation or braid move");
  front_move->add_option("file", file_a)->required();
  front_move->add_option("--move", move_kind, "far | braid")->capture_default_str();
  front_move->add_option("--at", move_at, "index of the first event of the move")->required();
  add_common(front_move, opt);

  auto* mcs_validate_cmd = app.add_subcommand("mcs-validate", "check the event-local conditions");
  mcs_validate_cmd->add_option("file", file_a)->required();
  add_common(mcs_validate_cmd, opt);

  auto* mcs_normalize =
      app.add_subcommand("mcs-normalize", "reduce all handle slides to elementary ones");
  mcs_normalize->add_option("file", file_a)->required();
  add_common(mcs_normalize, opt);

  auto* mcs_barcodes = app.add_subcommand("mcs-barcodes", "Barannikov barcode per interval");
  mcs_barcodes->add_option("file", file_a)->required();
  add_common(mcs_barcodes, opt);

  auto* sheaf_verify =
      app.add_subcommand("sheaf-verify", "microsupport and microstalk verification");
  sheaf_verify->add_option("file", file_a)->required();
  add_common(sheaf_verify, opt);

  auto* sheaf_hom = app.add_subcommand("sheaf-hom", "cohomology of the Hom total complex");
  sheaf_hom->add_option("file", file_a)->required();
  sheaf_hom->add_option("file2", file_b)->required();
  add_common(sheaf_hom, opt);

  auto* sheaf_endring =
      app.add_subcommand("sheaf-endring", "endomorphism cohomology and its H^0 ring");
  sheaf_endring->add_option("file", file_a)->required();
  add_common(sheaf_endring, opt);

  auto* enum_count =
      app.add_subcommand("enum-count", "count strict objects and isomorphism classes");
  enum_count->add_option("front", file_a)->required();
  add_common(enum_count, opt);

  auto* enum_list =
      app.add_subcommand("enum-list", "enumerate strict objects with class representatives");
  enum_list->add_option("front", file_a)->required();
  add_common(enum_list, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // --help exits 0; usage errors exit 2
  }

  try {
    using namespace legmcs;
    if (front_validate->parsed()) {
      FrontDiagram fd = load_front_file(file_a);
      Json j;
      j["formatVersion"] = 1;
      j["events"] = fd.events().size();
      j["strandCounts"] = fd.strand_counts();
      j["front"] = fd.render();
      return emit(j, opt, 0);
    }
    if (front_invariants->parsed()) {
      FrontDiagram fd = load_front_file(file_a);
      return emit(front_invariants_to_json(classical_invariants(fd)), opt, 0);
    }
    if (front_move->parsed()) {
      FrontDiagram fd = load_front_file(file_a);
      MoveKind kind;
      if (move_kind == "far")
        kind = MoveKind::FarCommute;
      else if (move_kind == "braid")
        kind = MoveKind::Braid;
      else
        fail("UsageError", "--move must be 'far' or 'braid'");
      FrontDiagram moved = apply_move(fd, kind, move_at);
      Json j;
      j["formatVersion"] = 1;
      j["front"] = moved.render();
      return emit(j, opt, 0);
    }
    if (mcs_validate_cmd->parsed()) {
      MCSObject s = load_mcs_file(file_a);
      auto diags = mcs_validate(s);
      Json j;
      j["formatVersion"] = 1;
      j["valid"] = diags.empty();
      j["diagnostics"] = diagnostics_to_json(diags);
      return emit(j, opt, diags.empty() ? 0 : 1);
    }
    if (mcs_normalize->parsed()) {
      MCSObject s = load_mcs_file(file_a);
      auto diags = mcs_validate(s);
      if (!diags.empty()) {
        Json j;
        j["formatVersion"] = 1;
        j["error"] = {{"code", "InvalidObject"}, {"message", "input fails mcs-validate"}};
        j["diagnostics"] = diagnostics_to_json(diags);
        return emit(j, opt, 1);
      }
      return emit(mcs_to_json(normalize_elementary(s)), opt, 0);
    }
    if (mcs_barcodes->parsed()) {
      MCSObject s = load_mcs_file(file_a);
      return emit(barcodes_to_json(s), opt, 0);
    }
    if (sheaf_verify->parsed()) {
      MCSObject s = load_mcs_file(file_a);
      MicrosupportReport rep = verify_microsupport(s);
      Json j;
      j["formatVersion"] = 1;
      j["microsupport"] = microsupport_to_json(rep);
      return emit(j, opt, rep.passed ? 0 : 1);
    }
    if (sheaf_hom->parsed()) {
      MCSObject s = load_mcs_file(file_a);
      MCSObject t = load_mcs_file(file_b);
      TotalComplex total(s, t);
      Json j;
      j["formatVersion"] = 1;
      j["cohomology"] = cohomology_to_json(total.cohomology());
      j["eulerCharacteristic"] = total.euler_characteristic();
      return emit(j, opt, 0);
    }
    if (sheaf_endring->parsed()) {
      MCSObject s = load_mcs_file(file_a);
      EndRingReport rep = end_ring(s);
      Json j;
      j["formatVersion"] = 1;
      j["cohomology"] = cohomology_to_json(rep.cohomology);
      j["endRing"] = end_ring_to_json(rep);
      return emit(j, opt, 0);
    }
    if (enum_count->parsed() || enum_list->parsed()) {
      FrontDiagram fd = load_front_file(file_a);
      Field F(opt.prime);
      EnumerationOptions eopts;
      eopts.branch_cap = opt.branch_cap;
      eopts.search_bound = opt.search_bound;
      EnumerationResult result = enumerate_strict(fd, F, opt.baseline, eopts);
      IsoClasses classes = group_iso_classes(result.objects, opt.search_bound);
      return emit(enumeration_to_json(fd, F, result, classes, enum_list->parsed()), opt, 0);
    }
  } catch (const legmcs::Error& e) {
    Json j;
    j["formatVersion"] = 1;
    j["error"] = {{"code", e.code()}, {"message", e.what()}};
    return emit(j, opt, 1);
  } catch (const std::exception& e) {
    Json j;
    j["formatVersion"] = 1;
    j["error"] = {{"code", "Internal"}, {"message", e.what()}};
    return emit(j, opt, 1);
  }
  return 2;
}
