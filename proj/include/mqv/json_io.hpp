#pragma once

#include <string>

#include <json.hpp>

#include "mqv/convolution.hpp"
#include "mqv/representation.hpp"
#include "mqv/stability.hpp"
#include "mqv/star_bridge.hpp"

namespace mqv {

using Json = nlohmann::ordered_json;

// Exact scalars are strings "p/q+r/s*i"; integers are also accepted on input.
// Float scalars are numbers, or [re, im] when the imaginary part is nonzero.
Json scalar_to_json(const GaussRational& v);
GaussRational scalar_from_json(const Json& j);
Json complex_to_json(const Complex& v);
Complex complex_from_json(const Json& j);

/// Nested row arrays. An empty matrix of any shape is written as [].
Json matrix_to_json(const QMatrix& m);
Json matrix_to_json(const CMatrix& m);
/// Shape-checked; [] is accepted for any shape with a zero dimension.
QMatrix matrix_from_json(const Json& j, std::size_t rows, std::size_t cols);
CMatrix cmatrix_from_json(const Json& j, std::size_t rows, std::size_t cols);
/// Shape inferred from the rows.
QMatrix matrix_from_json(const Json& j);

/// {"vertices": [...], "arrows": [{"id", "out", "in"}], "order": [...]}. A string is
/// taken as a named quiver ("A3", "affine-D4", "star:1,1,1", ...).
Json quiver_to_json(const DoubledQuiver& dq);
DoubledQuiver quiver_from_json(const Json& j);

// Per-vertex vectors are objects keyed by vertex name; arrays in vertex order are also read.
Json dims_to_json(const DoubledQuiver& dq, const DimVector& v);
DimVector dims_from_json(const DoubledQuiver& dq, const Json& j);
Json qvector_to_json(const DoubledQuiver& dq, const QVector& q);
QVector qvector_from_json(const DoubledQuiver& dq, const Json& j);
Json theta_to_json(const DoubledQuiver& dq, const ThetaVector& theta);
ThetaVector theta_from_json(const DoubledQuiver& dq, const Json& j);

/// {"quiver", "dims", "maps": {"arrowId": [[...]]}, "mode"}; absent maps are zero.
Json rep_to_json(const Representation& x);
Json rep_to_json(const FloatRepresentation& x);
/// Exact mode only; a float document is a ModeError.
Representation rep_from_json(const Json& j);
/// Either mode; exact entries are converted.
FloatRepresentation float_rep_from_json(const Json& j);
std::string rep_mode(const Json& j);

/// Representation document plus "framing": {"w", "a": {vertex: matrix}, "b": {vertex: matrix}}.
Json framed_to_json(const FramedRepresentation& x);
FramedRepresentation framed_from_json(const Json& j);

/// {"r", "matrices", "ladders", "flags" (optional), "beta"}
Json tuple_to_json(const LocalSystemData& d);
LocalSystemData tuple_from_json(const Json& j);

Json subspace_to_json(const DoubledQuiver& dq, const Subspace& s);
/// `dq` is the quiver the certificate lives on (the extension for framed verdicts).
Json verdict_to_json(const DoubledQuiver& dq, const StabilityVerdict& v);
Json relation_to_json(const DoubledQuiver& dq, const RelationReport<GaussRational>& r);
Json relation_to_json(const DoubledQuiver& dq, const RelationReport<Complex>& r);
Json convolution_to_json(const ConvolutionResult& c);
Json trace_to_json(const ReductionTrace& t);
Json genericity_to_json(const DoubledQuiver& dq, const GenericityReport& g);
Json dimension_check_to_json(const DimensionCheck& d);

/// j[key] when j is an object holding key, else j itself. Lets one document carry several inputs.
const Json& member_or_self(const Json& j, const std::string& key);

}  // namespace mqv
