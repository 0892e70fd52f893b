#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gsr/eval.hpp"
#include "gsr/mapping_table.hpp"

namespace gsr {

enum class SamplerKind { Uniform, Even };

// U(lo, hi, count): count independent uniform points per variable.
// E(lo, hi, count): count evenly spaced values per variable, inclusive of both ends.
struct Sampler {
    SamplerKind kind = SamplerKind::Uniform;
    double lo = 0.0;
    double hi = 1.0;
    int count = 20;

    std::string describe() const;
};

enum class Role { Train, Test };

using GroundTruth = double (*)(std::span<const double>);

struct Benchmark {
    std::string name;
    std::string suite;
    std::string expression;
    int d = 1;
    GroundTruth truth = nullptr;
    Sampler train;
    Sampler test;
    std::vector<Transform> x_kinds;
    std::vector<Transform> y_kinds;
    int m_psi = 1;

    MappingTable table_x() const;
    MappingTable table_y() const;
};

const std::vector<Benchmark>& benchmark_registry();

// Throws std::out_of_range for unknown names.
const Benchmark& find_benchmark(std::string_view name);

std::vector<std::string> suite_names();
// "all" lists every benchmark. Throws std::out_of_range for unknown suites.
std::vector<std::string> suite_members(std::string_view suite);

double ground_truth(std::string_view name, std::span<const double> x);

// Points whose ground truth is not finite are redrawn for U samplers and
// dropped for E samplers.
Dataset sample_dataset(const Benchmark& b, Role role, std::uint64_t seed);

// Grid of an E sampler in d dimensions. Uses count values per axis when the
// full grid has at most 1e6 points, otherwise ceil(count^(1/d)) per axis.
Matrix even_grid(const Sampler& s, int d);

// Seed used for the dataset of a given role.
std::uint64_t dataset_seed(std::string_view name, Role role, std::uint64_t seed);

// Filesystem-safe form of a benchmark name.
std::string file_stem(std::string_view name);

} // namespace gsr
