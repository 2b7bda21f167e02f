#pragma once

#include <string>

#include <json.hpp>

#include "motskit/finder.hpp"
#include "motskit/symmetry.hpp"

namespace motskit {

using Json = nlohmann::json;

Json to_json(const Tolerances& tol);
// Missing keys keep their defaults; unknown keys throw ConfigError.
Tolerances tolerances_from_json(const Json& j, Tolerances base = default_tolerances());

Json to_json(const Hypothesis& h);
Json to_json(const VerificationReport& r);
VerificationReport report_from_json(const Json& j);

Json to_json(const ZeroScan& z);
Json summary_json(const SymmetryDecomposition& d);
Json to_json(const IntegralIdentity& i);
Json summary_json(const LieExpansionIdentity& l);
Json summary_json(const GenuineSurfaceChecks& g);
Json summary_json(const SpectrumResult& s, int lowest = 10);

Json nodal_json(const NodalScalar& f);  // rows = theta rings
Json surface_json(const EmbeddedSurface& s);
Json eigenfunction_json(const Eigenpair& e, const SurfaceGrid& grid);

// Two columns re,im with a header line.
std::string spectrum_csv(const SpectrumResult& s);
// One JSON object per iteration.
std::string trace_jsonl(const FinderResult& r);

}  // namespace motskit
