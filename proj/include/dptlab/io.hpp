#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "dptlab/distribution.hpp"
#include "dptlab/monotone_family.hpp"
#include "dptlab/tables.hpp"

namespace dptlab::io {

// Text formats. `#` starts a comment that runs to the end of the line and
// blank lines are ignored everywhere.
//
//   function      n <arity> B <codomain>, then 2^n output symbols
//   distribution  [n <arity>], then 2^n weights, all p/q or all decimal
//   relation      n <arity> B <codomain>, then 2^n lines of accepted outputs
//   search set    [n <arity>], then one witness per line over {0,1,*} (`-` when n = 0)
//   family        [k <k>], then one subset per line as k characters, element 1 first

BooleanTable parse_function(std::string_view text);
std::string function_to_string(const BooleanTable& f);

/// Integer-only files are exact. Decimals give a float64 distribution.
using Distribution = std::variant<InputDistribution<Rational>, InputDistribution<double>>;
Distribution parse_distribution(std::string_view text);
std::string distribution_to_string(const InputDistribution<Rational>& mu);
std::string distribution_to_string(const InputDistribution<double>& mu);
int arity_of(const Distribution& mu);

RelationTable parse_relation(std::string_view text);
std::string relation_to_string(const RelationTable& p);

SearchSet parse_search_set(std::string_view text);
std::string search_set_to_string(const SearchSet& v);

MonotoneFamily parse_family(std::string_view text);
std::string family_to_string(const MonotoneFamily& family);

/// Reads a whole file; throws ParseError (line 0) when it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace dptlab::io
