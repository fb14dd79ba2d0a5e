#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "gridroute/commands.hpp"
#include "gridroute/errors.hpp"
#include "gridroute/version.hpp"

namespace {

using namespace gridroute;

void add_grid_flags(CLI::App* cmd, int& width, int& height, int& pins_per_layer,
                    int& boundary_cap, int& via_cap) {
  cmd->add_option("--width", width, "Grid cells in x")->check(CLI::PositiveNumber);
  cmd->add_option("--height", height, "Grid cells in y")->check(CLI::PositiveNumber);
  cmd->add_option("--pins-per-layer", pins_per_layer,
                  "Pins sampled per layer")->check(CLI::PositiveNumber);
  cmd->add_option("--boundary-cap", boundary_cap,
                  "Capacity of each boundary edge per layer")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--via-cap", via_cap,
                  "Capacity of each via edge (-1: width*height)");
}

RouterKind parse_router(const std::string& name) { return router_from_name(name); }

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"gridroute: multilayer grid routing with learned net ordering"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  GenOptions gen;
  TrainOptions train;
  CompareOptions compare;
  TransferOptions transfer;
  RouteOptions route;
  std::string gen_router = "ka", gen_features = "full";
  std::string transfer_router = "ka";
  std::string route_router = "ka", route_mode = "overflow-min";

  CLI::App* cgen = app.add_subcommand("gen", "Generate ranked-ordering datasets");
  cgen->add_option("--router", gen_router, "2D router: ka or st")
      ->check(CLI::IsMember({"ka", "st"}));
  cgen->add_option("--layers", gen.layers, "Number of layers k")
      ->check(CLI::PositiveNumber);
  cgen->add_option("--nets", gen.nets, "Number of nets")->check(CLI::Range(1, 8));
  cgen->add_option("--features", gen_features, "Feature mode: full or reduced")
      ->check(CLI::IsMember({"full", "reduced"}));
  cgen->add_option("--groups", gen.groups, "Data groups per dataset")
      ->check(CLI::PositiveNumber);
  cgen->add_option("--seed", gen.seed, "Dataset seed");
  cgen->add_option("--out", gen.out, "Output .jsonl path (single dataset)");
  cgen->add_flag("--paper-matrix", gen.paper_matrix,
                 "Emit the 16-dataset experiment matrix");
  cgen->add_option("--out-dir", gen.out_dir, "Directory for --paper-matrix files");
  add_grid_flags(cgen, gen.width, gen.height, gen.pins_per_layer, gen.boundary_cap,
                 gen.via_cap);

  CLI::App* ctrain = app.add_subcommand("train", "Train an ordering model");
  ctrain->add_option("--data", train.data, "Dataset .jsonl")->required();
  ctrain->add_option("--model", train.model_id, "Model id: 1, 2 or 3")
      ->check(CLI::Range(1, 3));
  ctrain->add_option("--epochs", train.epochs, "Training epochs")
      ->check(CLI::NonNegativeNumber);
  ctrain->add_option("--units", train.units, "Hidden layer width")
      ->check(CLI::PositiveNumber);
  ctrain->add_option("--lr", train.learning_rate, "Adam learning rate");
  ctrain->add_option("--batch", train.batch_size, "Batch size")
      ->check(CLI::PositiveNumber);
  ctrain->add_option("--split", train.split_fraction, "Training split fraction");
  ctrain->add_option("--seed", train.seed, "Run seed");
  ctrain->add_option("--out", train.out, "Checkpoint path");
  ctrain->add_option("--curve", train.curve_out, "Loss-curve CSV path");
  ctrain->add_option("--grid", train.grid,
                     "Run this many grid-search configurations, keep the best");

  CLI::App* ccomp = app.add_subcommand(
      "compare", "Accuracy of checkpoints vs heuristic and random ordering");
  ccomp->add_option("--data", compare.data, "Evaluation dataset .jsonl")->required();
  ccomp->add_option("--checkpoint", compare.checkpoints, "Model checkpoint (repeatable)");
  ccomp->add_option("--alpha", compare.alpha, "Heuristic wirelength coefficient");
  ccomp->add_option("--beta", compare.beta, "Heuristic pin-count coefficient");
  ccomp->add_option("--gamma", compare.gamma, "Heuristic density coefficient");
  ccomp->add_option("--seed", compare.seed, "Random-baseline seed");
  ccomp->add_option("--out", compare.out_csv, "CSV output path");

  CLI::App* ctrans = app.add_subcommand(
      "transfer", "Evaluate a checkpoint across layer counts");
  ctrans->add_option("--checkpoint", transfer.checkpoint, "Model checkpoint")
      ->required();
  ctrans->add_option("--router", transfer_router, "2D router for fresh datasets")
      ->check(CLI::IsMember({"ka", "st"}));
  ctrans->add_option("--min-layers", transfer.min_layers, "First layer count")
      ->check(CLI::PositiveNumber);
  ctrans->add_option("--max-layers", transfer.max_layers, "Last layer count")
      ->check(CLI::PositiveNumber);
  ctrans->add_option("--groups", transfer.groups, "Groups per layer count")
      ->check(CLI::PositiveNumber);
  ctrans->add_option("--seed", transfer.seed, "Base seed");
  ctrans->add_option("--out", transfer.out_csv, "CSV output path");
  add_grid_flags(ctrans, transfer.width, transfer.height, transfer.pins_per_layer,
                 transfer.boundary_cap, transfer.via_cap);

  CLI::App* croute = app.add_subcommand("route", "Route one seeded problem");
  croute->add_option("--seed", route.seed, "Problem seed");
  croute->add_option("--router", route_router, "2D router: ka or st")
      ->check(CLI::IsMember({"ka", "st"}));
  croute->add_option("--layers", route.layers, "Number of layers k")
      ->check(CLI::PositiveNumber);
  croute->add_option("--nets", route.nets, "Number of nets")->check(CLI::Range(1, 8));
  croute->add_option("--order", route.order,
                     "Ordering source: oracle, heuristic, model, random, or an "
                     "explicit permutation like 2,0,1");
  croute->add_option("--model", route.model_path, "Checkpoint for --order model");
  croute->add_option("--alpha", route.alpha, "Heuristic coefficient");
  croute->add_option("--beta", route.beta, "Heuristic coefficient");
  croute->add_option("--gamma", route.gamma, "Heuristic coefficient");
  croute->add_option("--mode", route_mode, "Assignment mode")
      ->check(CLI::IsMember({"strict", "overflow-min"}));
  croute->add_option("--emit-json", route.emit_json, "Dump the assigned solution");
  add_grid_flags(croute, route.width, route.height, route.pins_per_layer,
                 route.boundary_cap, route.via_cap);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (cgen->parsed()) {
      gen.router = parse_router(gen_router);
      gen.features = feature_mode_from_name(gen_features);
      return cmd_gen(gen);
    }
    if (ctrain->parsed()) return cmd_train(train);
    if (ccomp->parsed()) return cmd_compare(compare);
    if (ctrans->parsed()) {
      transfer.router = parse_router(transfer_router);
      return cmd_transfer(transfer);
    }
    if (croute->parsed()) {
      route.router = parse_router(route_router);
      route.mode = route_mode == "strict" ? AssignMode::Strict
                                          : AssignMode::OverflowMin;
      return cmd_route(route);
    }
  } catch (const InfeasibleError& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return kExitInfeasible;
  } catch (const DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kExitData;
  } catch (const GenerationError& e) {
    std::fprintf(stderr, "generation error: %s\n", e.what());
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
