// satmatch: command-line front end for the saturation library.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "satmatch/commands.hpp"

namespace {

using namespace satmatch;

struct Common {
  std::string market;
  std::string format = "text";
};

void add_common(CLI::App* sub, Common& c, bool needs_market = true) {
  if (needs_market) sub->add_option("market", c.market, "market file (JSON)")->required();
  sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "structured"}));
}

template <typename Report>
int emit(const Report& r, int code, const std::string& format) {
  if (format == "structured") {
    std::cout << nlohmann::json(r).dump(2) << "\n";
  } else {
    std::cout << render_text(r);
  }
  return code;
}

int emit_error(const ErrorReport& e, int code, const std::string& format) {
  if (format == "structured") {
    std::cout << nlohmann::json{{"error", e}}.dump(2) << "\n";
  }
  std::cerr << "satmatch: " << e.message << "\n";
  return code;
}

template <typename Fn>
int guarded(const std::string& format, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    return emit_error({"parse", e.what(), e.line(), e.column(), std::nullopt}, kExitUsage, format);
  } catch (const CapExceeded& e) {
    return emit_error({"cap", e.what(), std::nullopt, std::nullopt, e.estimate()}, kExitCap, format);
  } catch (const InputError& e) {
    return emit_error({"validation", e.what(), std::nullopt, std::nullopt, std::nullopt}, kExitUsage, format);
  } catch (const InternalError& e) {
    return emit_error({"internal", e.what(), std::nullopt, std::nullopt, std::nullopt}, 70, format);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stable matchings that saturate one side of a bipartite market"};
  app.require_subcommand(1);

  Common analyze_c, match_c, enum_c, adv_c, verify_c;

  std::string analyze_side = "x";
  auto* analyze_cmd = app.add_subcommand("analyze", "check which vertices are matched under every instance");
  add_common(analyze_cmd, analyze_c);
  analyze_cmd->add_option("--side", analyze_side, "side to check")->check(CLI::IsMember({"x", "y"}));

  std::string propose = "x";
  auto* match_cmd = app.add_subcommand("match", "run deferred acceptance on the market's preferences");
  add_common(match_cmd, match_c);
  match_cmd->add_option("--propose", propose, "proposing side")->check(CLI::IsMember({"x", "y"}));

  std::uint64_t enum_cap = kDefaultNodeCap;
  auto* enum_cmd = app.add_subcommand("enumerate", "list every stable matching");
  add_common(enum_cmd, enum_c);
  enum_cmd->add_option("--cap", enum_cap, "search-node cap")->check(CLI::PositiveNumber);

  std::string target, out_path, adv_side;
  std::uint64_t adv_cap = kDefaultNodeCap;
  auto* adv_cmd = app.add_subcommand("adversary", "build preferences that leave a vertex unmatched");
  add_common(adv_cmd, adv_c);
  adv_cmd->add_option("--target", target, "vertex name")->required();
  adv_cmd->add_option("--side", adv_side, "side of the target when the name is ambiguous")
      ->check(CLI::IsMember({"x", "y"}));
  adv_cmd->add_option("--out", out_path, "write the market with the constructed preferences here");
  adv_cmd->add_option("--cap", adv_cap, "search-node cap for the confirmation")->check(CLI::PositiveNumber);

  VerifyOptions vopt;
  std::uint32_t max_side = vopt.max_side;
  auto* verify_cmd = app.add_subcommand("verify", "exhaustively check the characterizations on small markets");
  add_common(verify_cmd, verify_c, false);
  verify_cmd->add_option("--max-side", max_side, "largest side size to enumerate")->check(CLI::Range(1, 4));
  verify_cmd->add_option("--cap", vopt.instance_cap, "exhaustive instance cap per graph")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seeds", vopt.seeds, "sampled instances per graph above the cap");
  verify_cmd->add_option("--seed", vopt.seed, "base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (*analyze_cmd) {
    return guarded(analyze_c.format, [&] {
      const Market m = load_market(analyze_c.market);
      const AnalyzeReport r = analyze(m, parse_side(analyze_side));
      return emit(r, exit_code(r), analyze_c.format);
    });
  }
  if (*match_cmd) {
    return guarded(match_c.format, [&] {
      const Market m = load_market(match_c.market);
      return emit(match(m, parse_side(propose)), kExitOk, match_c.format);
    });
  }
  if (*enum_cmd) {
    return guarded(enum_c.format, [&] {
      const Market m = load_market(enum_c.market);
      return emit(enumerate(m, enum_cap), kExitOk, enum_c.format);
    });
  }
  if (*adv_cmd) {
    return guarded(adv_c.format, [&] {
      const Market m = load_market(adv_c.market);
      std::optional<Side> side;
      if (!adv_side.empty()) side = parse_side(adv_side);
      const VertexId v = find_vertex(m, target, side);
      std::optional<Market> emitted;
      AdversaryReport r = adversary(m, v, adv_cap, &emitted);
      if (emitted && !out_path.empty()) {
        std::ofstream f(out_path);
        if (!f) throw InputError("cannot write " + out_path);
        f << serialize_market_file(to_market_file(*emitted)) << "\n";
        r.out_path = out_path;
      }
      return emit(r, exit_code(r), adv_c.format);
    });
  }
  if (*verify_cmd) {
    return guarded(verify_c.format, [&] {
      vopt.max_side = max_side;
      vopt.market_max_side = max_side + 1;
      vopt.max_classes = std::min<std::uint32_t>(3, max_side);
      const VerifyReport r = run_verification(vopt);
      return emit(r, exit_code(r), verify_c.format);
    });
  }
  return kExitUsage;
}
