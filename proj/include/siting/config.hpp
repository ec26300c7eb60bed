#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "siting/scenario.hpp"

namespace siting {

struct ConfigError : std::runtime_error {
    // line_no 0 marks errors with no file location (missing config, bad flag
    // combinations).
    ConfigError(std::size_t line_no, const std::string& message)
        : std::runtime_error(line_no ? "config line " + std::to_string(line_no) + ": " + message
                                     : message),
          line(line_no) {}
    std::size_t line = 0;
};

// Everything a CLI run needs, loaded from a flat key=value file with dotted
// section prefixes ("chain.max_gap_min = 5"). Unknown keys are errors.
struct PipelineConfig {
    std::string input_path;
    std::string output_dir = "out";

    PipelineParams pipeline;

    bool congestion_enabled = false;
    CongestionPolicy congestion;
    bool rush_hour_only = false;  // rebuild chains from rush-window departures

    SolveParams solve;
    SynthParams synth;

    // Stochastic stages refuse to run when neither the config nor --seed
    // provided a seed.
    bool solve_seed_set = false;
    bool synth_seed_set = false;
    bool cluster_seed_set = false;

    // Pipeline params with the congestion switches applied. The departure
    // filter applies to the plain variant too, so a comparison pair shares
    // its demand set.
    PipelineParams effective_pipeline(bool with_congestion) const;
};

PipelineConfig parse_config(std::istream& in);
PipelineConfig load_config(const std::string& path);  // throws ConfigError / runtime_error

}  // namespace siting
