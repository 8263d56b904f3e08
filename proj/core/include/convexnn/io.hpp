#pragma once

#include <Eigen/Core>
#include <string>

#include "convexnn/fw.hpp"
#include "convexnn/geometry.hpp"
#include "convexnn/model.hpp"

namespace convexnn {

// Shortest round-trip decimal encoding (std::to_chars); parsing recovers the
// exact double.
std::string format_double(double v);

// Dataset CSV with header x1,...,xd,y; R and q come from the caller and are
// validated against the points.
Dataset read_dataset_csv(const std::string& path, double R, double q);
void write_dataset_csv(const std::string& path, const Dataset& data);

// Single-column CSV (optional one-line header).
Eigen::VectorXd read_vector_csv(const std::string& path);
void write_vector_csv(const std::string& path, const Eigen::VectorXd& v,
                      const std::string& header = "g");

// Model JSON: {"version":1,"alpha":..,"p":..,"R":..,"units":[{"eta":..,
// "v":[..]}]}.  Round trips are bit-faithful for finite doubles. Files with a
// version other than 1 are rejected.
std::string model_to_json(const SignedMeasureModel& model);
SignedMeasureModel model_from_json(const std::string& text);
void save_model(const std::string& path, const SignedMeasureModel& model);
SignedMeasureModel load_model(const std::string& path);

// Convex bodies: {"generators":[[..],..]} / {"center":[..],"shape":[[..],..]}.
Zonotope zonotope_from_json(const std::string& text);
Ellipsoid ellipsoid_from_json(const std::string& text);
std::string zonotope_to_json(const Zonotope& Z);
std::string ellipsoid_to_json(const Ellipsoid& E);
bool json_is_ellipsoid(const std::string& text);

void write_trace_csv(const std::string& path, const TrainTrace& trace,
                     bool with_timestamp);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace convexnn
