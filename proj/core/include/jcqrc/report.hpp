// report.hpp: CSV writers for results, traces and Wigner grids.
#pragma once

#include "jcqrc/pipeline.hpp"
#include "jcqrc/readout.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace jcqrc {

// Shortest form with 12 significant digits; NaN becomes an empty cell.
std::string format_number(double value);

// name,delay,train,test
void write_metrics_csv(const ExperimentResult& result, std::ostream& out);
// step,target,predicted
void write_predictions_csv(const PredictionTrace& trace, std::ostream& out);
// x,p,W with x varying slowest
void write_wigner_csv(const RealMatrix& w, const WignerGrid& grid, std::ostream& out);
// step,distance,relative (relative to the distance at the flipped step)
void write_fading_csv(const FadingTrace& trace, std::ostream& out);

// Writes through a temporary file and renames, so readers never see partial output.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace jcqrc
