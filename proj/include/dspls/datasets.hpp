#pragma once

// Gaussian-mixture spectra simulation with a sparse ground-truth response,
// Savitzky-Golay first-derivative preprocessing, and CSV ingestion/emission.

#include <cstdint>
#include <string>
#include <vector>

#include "dspls/linalg.hpp"

namespace dspls {

/// Inclusive 1-based variable index range.
struct IndexRange {
    std::size_t first = 0;
    std::size_t last = 0;
};

struct SimulationRecipe {
    std::size_t n_obs = 0;
    std::size_t n_vars = 0;
    std::size_t n_peaks = 0;
    double sigma = 1.0;                    // peak scale, in variable-index units
    double amp_min = 1.0;
    double amp_max = 1.0;
    std::vector<IndexRange> active_set;    // ranges of response-driving variables
    std::vector<double> response_weights;  // one per active index; empty = random in [0.5, 1.5]
    double noise_sd = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
    /// Expanded, sorted, deduplicated 0-based active indices.
    std::vector<std::size_t> active_indices() const;
};

struct SimulatedDataset {
    Matrix X;
    Vector y;
    SimulationRecipe recipe;
    Vector true_beta;
};

/// Draw order per seed: peak amplitudes, peak locations, X noise, random
/// response weights (when requested), then y noise. A zero noise_sd skips its
/// phase entirely.
SimulatedDataset simulate(const SimulationRecipe& recipe);

SimulationRecipe dsim_recipe(std::uint64_t seed);
SimulationRecipe dsim_bar_recipe(std::uint64_t seed);

/// Per-row first derivative by local least-squares polynomial fit; windows
/// are truncated (and refit) at the boundaries, so polynomials up to the
/// given degree differentiate exactly everywhere.
Matrix savitzky_golay_derivative(const Matrix& X, std::size_t window = 15,
                                 std::size_t degree = 2);

Matrix load_csv_matrix(const std::string& path, bool skip_header = false);
Vector load_csv_vector(const std::string& path, bool skip_header = false);
void save_csv(const std::string& path, const Matrix& m);
void save_csv(const std::string& path, const Vector& v);

SimulationRecipe load_recipe(const std::string& path);
void save_recipe(const std::string& path, const SimulationRecipe& recipe);

/// Shortest representation that parses back to the identical double.
std::string format_double(double value);

}  // namespace dspls
