#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "wvgeom/blochgeo.hpp"
#include "wvgeom/experiments.hpp"
#include "wvgeom/majorana.hpp"
#include "wvgeom/qstate.hpp"
#include "wvgeom/weakval.hpp"

namespace wvgeom::io {

using Json = nlohmann::json;

/// %.17g; NaN and infinities print as "nan", "inf", "-inf".
std::string format_g17(double v);

/// Serializes with sorted keys, two-space indentation and 17 significant
/// digits for every float. Non-finite numbers become null.
std::string dump(const Json& j);

/// Parses JSON text. Throws Parse on malformed input.
Json parse(const std::string& text);
Json read_file(const std::string& path);

Json encode(Complex z);
Json encode(const PureState& s);
Json encode(const CMatrix& m);
Json encode(const Observable& a);
Json encode(const weakval::WeakValueResult& r);
Json encode(const majorana::MajoranaStar& s);
Json encode(const majorana::StarSet& s);
Json encode(const majorana::CoherentMapping& m);
Json encode(const majorana::ArgumentDecomposition& d);
Json encode(const majorana::QutritReduction& r);
Json encode(const blochgeo::SceneGraph& g);
Json encode(const experiments::CnotReport& r);
Json encode(const experiments::ExtremaLocus& l);

/// A complex number as [re, im] or a bare real. Throws Parse otherwise.
Complex decode_complex(const Json& j);
/// {"dim": N, "amps": [...]}. Shape errors are Parse; a wrong norm or a dim
/// that disagrees with the amplitudes is Validation.
PureState decode_state(const Json& j, const Tolerances& tol = {});
/// {"dim": N, "rows": [[...], ...]}; Hermiticity is validated.
Observable decode_observable(const Json& j, const Tolerances& tol = {});
/// Sweep configuration. Grids are arrays or {"start", "step", "count"} or
/// {"start", "stop", "count"}; every schema problem is Validation.
experiments::SweepConfig decode_sweep_config(const Json& j);

}  // namespace wvgeom::io
