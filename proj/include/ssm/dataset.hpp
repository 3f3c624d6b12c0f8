#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssm/matrix.hpp"

namespace ssm {

struct Dataset {
    Matrix examples;
    std::vector<int> labels;

    bool has_labels() const { return !labels.empty(); }
};

// CSV with header v0,...,vN and an optional trailing integer label column.
// Every value must lie in [0,1]; violations are reported with row and column.
Dataset load_dataset_csv(const std::string& path);
void save_dataset_csv(const std::string& path, const Dataset& ds);

// All horizontal bar patterns (label 0) followed by all vertical stripe
// patterns (label 1); 2^rows + 2^cols flattened binary images.
Dataset make_bars_stripes(std::size_t rows, std::size_t cols);

// Two spherical Gaussian clusters centered at 0.5 -/+ sep*sigma/2 in every
// coordinate, clamped to [0,1]. Class 0 rows first.
Dataset make_blobs(std::size_t per_class, std::size_t dim, double sep_sigmas, double sigma,
                   std::uint64_t seed);

}  // namespace ssm
