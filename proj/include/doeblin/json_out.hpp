#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "doeblin/channel.hpp"
#include "doeblin/coefficients.hpp"
#include "doeblin/coupling.hpp"

namespace doeblin {

using ojson = nlohmann::ordered_json;

/// Serializes with insertion-ordered keys, two-space indentation and every
/// floating-point number printed with 17 significant digits.
std::string dump_json(const ojson& j);

/// "%.17g"; non-finite values are not representable and throw.
std::string format_double(double v);

ojson to_json(const std::vector<double>& v);
ojson to_json(const Channel& w);  // array of rows
ojson to_json(const CoefficientReport& r);
ojson to_json(const Coupling& c);
ojson to_json(const SparseTable& t, std::size_t n, std::size_t m);

}  // namespace doeblin
