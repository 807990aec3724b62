#pragma once

#include <cstdint>
#include <vector>

#include "tda/rng.hpp"

namespace tda {

using PointCloud = std::vector<std::vector<double>>;

// Uniform (area measure) samples from the annulus r_in <= |p| <= r_out,
// by rejection from the bounding box.  `proposals`, when given, counts the
// total number of box draws (for acceptance-rate tests).
PointCloud sample_annulus(std::size_t count, double r_in, double r_out, Rng& rng,
                          std::uint64_t* proposals = nullptr);

// Length-measure samples from the union of the circle of radius 2 at the
// origin and the circle of radius 1 at (0.8, 0): theta uniform, big circle
// with probability 2/3.
PointCloud sample_two_circles(std::size_t count, Rng& rng);

// Area-uniform samples from the sphere of given radius (normalized
// Gaussian triples, scaled).
PointCloud sample_sphere(std::size_t count, double radius, Rng& rng);

// Area-uniform samples from the torus with minor radius r, major radius R:
// psi uniform, theta by rejection with acceptance (R + r cos theta)/(R + r).
PointCloud sample_torus(std::size_t count, double r, double R, Rng& rng,
                        std::uint64_t* proposals = nullptr);

// Independent uniform draws per axis from [low_i, high_i].
PointCloud sample_box(std::size_t count,
                      const std::vector<std::pair<double, double>>& bounds, Rng& rng);

// Perturb each coordinate by independent N(0, sigma2).
PointCloud add_gaussian_noise(const PointCloud& coords, double sigma2, Rng& rng);

// Replace floor(fraction * n) points, chosen uniformly without
// replacement, by box draws.
PointCloud replace_uniform_noise(const PointCloud& coords, double fraction,
                                 const std::vector<std::pair<double, double>>& bounds,
                                 Rng& rng);

// Append `count` points (0, u) with u uniform in [-0.8, 0.8].
PointCloud add_diameter_linkage(const PointCloud& coords, std::size_t count, Rng& rng);

// Rank points by distance to their k-th nearest neighbor (densest first)
// and keep the top ceil(keep_fraction * n); ties broken by point index.
PointCloud density_filter_knn(const PointCloud& coords, std::size_t k,
                              double keep_fraction);

} // namespace tda
