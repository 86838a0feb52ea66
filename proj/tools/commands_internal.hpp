#pragma once

// Shared pieces of the subcommands. Each run returns an Outcome so the
// suite can report a headline metric next to the exit code.

#include <string>
#include <vector>

#include "cli.hpp"
#include "oslab/lattice.hpp"
#include "oslab/lie.hpp"

namespace oslab::cli::detail {

struct Outcome {
  int code = kPass;
  double metric = 0.0;
  std::string note;
};

GaussianEuclideanMeasure make_measure(const RunConfig& c);
AlgebraDocument algebra_document(const RunConfig& c);

Outcome rp_check(const RunConfig& c, const Context& ctx);
Outcome reconstruct(const RunConfig& c, const Context& ctx);
Outcome npoint(const RunConfig& c, const Context& ctx);
Outcome r1r2(const RunConfig& c, const Context& ctx);
Outcome cdual(const AlgebraDocument& doc, const std::optional<Eigen::MatrixXd>& su2_change, const Context& ctx);
Outcome cone_check(const RunConfig& c, const Context& ctx);

void note(const Context& ctx, const std::string& line);

}  // namespace oslab::cli::detail
