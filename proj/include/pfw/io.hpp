#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pfw/cascade.hpp"
#include "pfw/filter.hpp"
#include "pfw/frame_verify.hpp"
#include "pfw/lattice_algebra.hpp"
#include "pfw/lawton.hpp"
#include "pfw/partition.hpp"

namespace pfw::io {

// Interchange formats. Integers are native JSON integers, mask coefficients
// are decimal strings with 17 significant digits (exact round trip), and every
// reader throws ParseError on malformed input.

using Json = nlohmann::ordered_json;

Json to_json(const IntMatrix& m);
/// Accepts {"d": n, "entries": [[...]]} or a bare array of rows.
IntMatrix matrix_from_json(const Json& j);

/// 1-based indices: [{"kind":"swap","i":1,"j":2}, {"kind":"shear","i":1,"j":2,"sign":1},
/// {"kind":"sign","p":1}, {"kind":"dilate","p":3}].
Json to_json(const FactorList& f);
FactorList factors_from_json(const Json& j);

Json to_json(const PartitionData& pd);
PartitionData partition_from_json(const Json& j);

std::string format_coeff(double x);
double parse_coeff(const Json& j);

Json to_json(const Mask& m);
/// Accepts a mask object or {"masks": [...]}, taking the first entry.
Mask mask_from_json(const Json& j);
std::vector<Mask> masks_from_json(const Json& j);

/// {"A": ..., "level": k, "cells": [{"m": [...], "v": x}, ...]}, plus "tile"
/// when it is not the identity.
Json to_json(const SampledFunction& f);
SampledFunction function_from_json(const Json& j);

Json to_json(const PartitionReport& r);
Json to_json(const QmfReport& r);
Json to_json(const SupportBound& b);
Json to_json(const PartialSum& p);
Json to_json(const TelescopeResult& t);
Json to_json(const FrameReport& r);

/// "m1,...,md,value" rows in lexicographic index order, with a header line.
std::string to_csv(const SampledFunction& f);
/// "J,L_J" rows.
std::string lj_csv(const std::map<int, double>& curve);
/// "n_lo,n_hi,partial_sum" rows.
std::string partial_csv(const std::vector<PartialSum>& sums);

/// "a..b,c..d,..." (a bare "a" means "a..a") as the box support, first
/// coordinate fastest.
std::vector<Point> parse_support(const std::string& spec);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

}  // namespace pfw::io
