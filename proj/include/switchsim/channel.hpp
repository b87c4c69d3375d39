#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "switchsim/state.hpp"

namespace switchsim {

using Json = nlohmann::json;

// Completely positive trace-preserving map in Kraus form. Construction checks
// operator shapes, finiteness and the completeness relation sum K^dag K = I
// (residual below 1e-9).
class KrausChannel {
  public:
    KrausChannel(int dim_in, int dim_out, std::vector<Mat> kraus, std::string label = "");

    int dim_in() const { return dim_in_; }
    int dim_out() const { return dim_out_; }
    int kraus_count() const { return static_cast<int>(kraus_.size()); }
    const std::vector<Mat>& kraus() const { return kraus_; }
    const std::string& label() const { return label_; }

  private:
    int dim_in_;
    int dim_out_;
    std::vector<Mat> kraus_;
    std::string label_;
};

// max |(sum K^dag K - I)_ab| for a raw operator list, usable before a channel exists
double completeness_residual(const std::vector<Mat>& kraus, int dim_in);

struct CompletenessReport {
    double max_residual = 0.0;
    bool ok() const { return max_residual < 1e-9; }
};
CompletenessReport validate_cptp(const KrausChannel& ch);

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho);

// Linear extension of the channel to arbitrary operators (no state validation).
Mat apply_to_operator(const KrausChannel& ch, const Mat& op);

// after . before: `before` acts first
KrausChannel compose(const KrausChannel& after, const KrausChannel& before);

// Choi operator (id (x) ch) applied to the unnormalized maximally entangled
// operator; the input factor comes first. Validated PSD (eigenvalue floor
// -1e-9) and trace-preserving (partial trace over the output factor equals the
// identity within 1e-9).
class ChoiMatrix {
  public:
    ChoiMatrix(int dim_in, int dim_out, Mat m);

    int dim_in() const { return dim_in_; }
    int dim_out() const { return dim_out_; }
    const Mat& matrix() const { return m_; }

  private:
    int dim_in_;
    int dim_out_;
    Mat m_;
};

ChoiMatrix choi(const KrausChannel& ch);
double choi_distance(const ChoiMatrix& a, const ChoiMatrix& b);

KrausChannel identity_channel(int dim = 2);
// Kraus sqrt(p0) I, sqrt(p1) sigma_y, sqrt(p2) sigma_z; p_i >= 0, sum 1 within 1e-12
KrausChannel pauli_channel(double p0, double p1, double p2);
KrausChannel bit_flip(double r);
KrausChannel phase_flip(double s);

// Rewrites the Kraus list through an isometry v on the operator index:
// K'_a = sum_i v(a,i) K_i. v must have orthonormal columns (v^dag v = I).
// The represented channel is unchanged.
KrausChannel remix_kraus(const KrausChannel& ch, const Mat& v);

Json to_json(const KrausChannel& ch);
KrausChannel channel_from_json(const Json& j);

}  // namespace switchsim
