#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <cssel/matrix.hpp>
#include <cssel/parallel.hpp>

namespace cssel {

/**
 * Deterministic dual-set sparsification.
 *
 * Given n rows v_i in R^k forming a decomposition of the identity
 * (sum v_i v_i^T = I_k) and a second set of n rows (either u_i in R^ell with
 * sum u_i u_i^T = I_ell, or arbitrary vectors a_i), a greedy barrier process
 * picks r weights s >= 0 with at most r nonzeros such that simultaneously
 *
 *   lambda_k( sum s_i v_i v_i^T ) >= (1 - sqrt(k/r))^2          (lower side)
 *   lambda_1( sum s_i u_i u_i^T ) <= (1 + sqrt(ell/r))^2        (spectral upper side)
 *   trace   ( sum s_i a_i a_i^T ) <= sum ||a_i||^2              (Frobenius upper side)
 *
 * Each step scores every candidate against two soft eigenvalue barriers
 * (walls moving by delta_L = 1 below and delta_U above), picks the smallest
 * index whose upper score does not exceed its lower score, and adds weight
 * t = 2 / (U + L) to it. A final rescale by (1 - sqrt(k/r)) / r produces the
 * guarantees above.
 */

enum class SparsifierVariant { SpectralSpectral, SpectralFrobenius };

struct BarrierConfig {
	Index n = 0;    ///< number of candidate rows
	Index k = 0;    ///< lower-side dimension
	Index ell = 0;  ///< upper-side dimension
	Index r = 0;    ///< weight budget (k < r <= n)
	SparsifierVariant variant = SparsifierVariant::SpectralSpectral;
};

/// Wall schedule constants. The lower wall starts at -sqrt(rk) and moves by
/// delta_L = 1 per step; the upper wall starts at u0 and moves by delta_U.
struct Constants {
	double delta_L = 1.0;
	double delta_U = 0.0;
	double l0 = 0.0;
	double u0 = 0.0;
};

/// Running state of the greedy process after tau steps.
struct BarrierState {
	Index tau = 0;
	Vector s;            ///< raw (unscaled) weights, length n
	Matrix A_tau;        ///< k x k accumulation sum s_i v_i v_i^T
	Matrix B_tau;        ///< ell x ell accumulation (SpectralSpectral generic path only, else 0x0)
	double trace_B = 0.0;  ///< running trace (SpectralFrobenius)
	double l_tau = 0.0;
	double u_tau = 0.0;
};

/// Final output: rescaled weights and their support.
struct WeightedSelection {
	Vector weights;              ///< length n, equal to raw s_r times (1 - sqrt(k/r)) / r
	std::vector<Index> support;  ///< sorted indices with weights > 0, size <= r
};

/// Per-step diagnostics, recorded when SparsifierOptions::trace is set.
struct StepTrace {
	Index tau = 0;          ///< step index (0-based)
	double l = 0.0;         ///< lower wall before the step
	double u = 0.0;         ///< upper wall before the step
	Index chosen = -1;
	double t = 0.0;
	double sum_U = 0.0;     ///< sum of upper scores over all candidates
	double sum_L = 0.0;     ///< sum of lower scores over all candidates
	double lambda_min_A = 0.0;  ///< after the update
	double upper_extent = 0.0;  ///< lambda_max(B) or trace, after the update
};

struct SparsifierOptions {
	/// Verify per-step barrier and averaging invariants (always verified when
	/// a trace sink is attached or in debug builds).
	bool check_invariants =
#ifdef NDEBUG
		false;
#else
		true;
#endif
	std::vector<StepTrace>* trace = nullptr;
};

/// Tag type for the standard-basis upper side (u_i = e_i), which admits an
/// O(n) per-step path with output bit-identical to the generic one.
struct IdentityRows {
	Index n = 0;
};

/// Tag wrapper for the arbitrary-vector (Frobenius) upper side.
struct FrobeniusRows {
	const Matrix* rows = nullptr;  ///< n x ell, row i = a_i
};

namespace detail {

// --- barrier potentials from precomputed eigenvalues -----------------------

inline double phi_lower_from(const Vector& lam, double l, const char* who) {
	double sum = 0.0;
	for (Index i = 0; i < lam.size(); ++i) {
		const double d = lam(i) - l;
		if (!(d > 0.0))
			throw NumericalBreakdown(std::string(who) + ": lower wall " + std::to_string(l) +
			                         " reached eigenvalue " + std::to_string(lam(i)));
		sum += 1.0 / d;
	}
	return sum;
}

inline double phi_upper_from(const Vector& lam, double u, const char* who) {
	double sum = 0.0;
	for (Index i = 0; i < lam.size(); ++i) {
		const double d = u - lam(i);
		if (!(d > 0.0))
			throw NumericalBreakdown(std::string(who) + ": upper wall " + std::to_string(u) +
			                         " reached eigenvalue " + std::to_string(lam(i)));
		sum += 1.0 / d;
	}
	return sum;
}

// Lower score of candidate i from its transformed coordinates (row i of
// W = V Q_A): quadratic forms against (A - (l+1) I)^-2 and ^-1.
inline double l_score_from_transformed(const Matrix& W, Index i, const Vector& lam,
                                       double shifted_wall, double phi_diff) {
	double inv1 = 0.0, inv2 = 0.0;
	for (Index j = 0; j < lam.size(); ++j) {
		const double w = W(i, j);
		const double w2 = w * w;
		const double d = lam(j) - shifted_wall;
		inv1 += w2 / d;
		inv2 += w2 / (d * d);
	}
	return inv2 / phi_diff - inv1;
}

// Upper score of candidate i, same transformed-coordinate scheme.
inline double u_score_from_transformed(const Matrix& W, Index i, const Vector& lam,
                                       double shifted_wall, double phi_diff) {
	double inv1 = 0.0, inv2 = 0.0;
	for (Index j = 0; j < lam.size(); ++j) {
		const double w = W(i, j);
		const double w2 = w * w;
		const double d = shifted_wall - lam(j);
		inv1 += w2 / d;
		inv2 += w2 / (d * d);
	}
	return inv2 / phi_diff + inv1;
}

}  // namespace detail

// --- public score operations ------------------------------------------------

/// Lower barrier potential: sum_i 1 / (lambda_i(A) - l); requires l strictly
/// below the spectrum.
inline double phi_lower(double l, const Matrix& A) {
	const SymEig eig = sym_eig(A);
	return detail::phi_lower_from(eig.lambda, l, "phi_lower");
}

/// Upper barrier potential: sum_i 1 / (u - lambda_i(B)); requires u strictly
/// above the spectrum.
inline double phi_upper(double u, const Matrix& B) {
	const SymEig eig = sym_eig(B);
	return detail::phi_upper_from(eig.lambda, u, "phi_upper");
}

/**
 * @brief Lower-side candidate score at wall l with step delta_L.
 *
 * L(v) = v^T (A - l' I)^-2 v / (phi_lower(l', A) - phi_lower(l, A))
 *        - v^T (A - l' I)^-1 v,  with l' = l + delta_L.
 *
 * The shifted inverse only needs l' to avoid the spectrum (the walls may sit
 * above individual eigenvalues in off-algorithm use); an exact hit is a
 * singular shift.
 */
inline double L_score(const Vector& v, double delta_L, const Matrix& A, double l) {
	if (v.size() != A.rows() || A.rows() != A.cols())
		throw InvalidInput("L_score: dimension mismatch");
	const SymEig eig = sym_eig(A);
	const double lp = l + delta_L;
	double phi_at = 0.0, phi_shifted = 0.0;
	for (Index i = 0; i < eig.lambda.size(); ++i) {
		const double d0 = eig.lambda(i) - l;
		const double d1 = eig.lambda(i) - lp;
		if (d0 == 0.0 || d1 == 0.0) throw NumericalBreakdown("L_score: singular shift");
		phi_at += 1.0 / d0;
		phi_shifted += 1.0 / d1;
	}
	const double phi_diff = phi_shifted - phi_at;
	Matrix W(1, eig.lambda.size());
	W.row(0) = (eig.Q.transpose() * v).transpose();
	return detail::l_score_from_transformed(W, 0, eig.lambda, lp, phi_diff);
}

/**
 * @brief Upper-side candidate score at wall u with step delta_U.
 *
 * U(u_vec) = u_vec^T ((u'+0) I - B)^-2 u_vec / (phi_upper(u, B) - phi_upper(u', B))
 *            + u_vec^T (u' I - B)^-1 u_vec,  with u' = u + delta_U.
 */
inline double U_score(const Vector& u_vec, double delta_U, const Matrix& B, double u) {
	if (u_vec.size() != B.rows() || B.rows() != B.cols())
		throw InvalidInput("U_score: dimension mismatch");
	const SymEig eig = sym_eig(B);
	const double up = u + delta_U;
	const double phi_at = detail::phi_upper_from(eig.lambda, u, "U_score");
	const double phi_shifted = detail::phi_upper_from(eig.lambda, up, "U_score");
	const double phi_diff = phi_at - phi_shifted;
	if (!(phi_diff > 0.0)) throw NumericalBreakdown("U_score: non-positive potential drop");
	Matrix W(1, eig.lambda.size());
	W.row(0) = (eig.Q.transpose() * u_vec).transpose();
	return detail::u_score_from_transformed(W, 0, eig.lambda, up, phi_diff);
}

/// Frobenius upper-side score: ||a||^2 / delta_U, constant across steps.
inline double U_F_score(const Vector& a, double delta_U) {
	if (!(delta_U > 0.0)) throw InvalidInput("U_F_score: delta_U must be positive");
	return a.squaredNorm() / delta_U;
}

/// Wall schedule for a run. For the SpectralFrobenius variant pass the total
/// squared norm of the a-side vectors.
inline Constants make_constants(SparsifierVariant variant, Index k, Index ell, Index r,
                                double sum_a_norm2 = 0.0) {
	Constants c;
	c.delta_L = 1.0;
	const double kd = static_cast<double>(k);
	const double rd = static_cast<double>(r);
	const double eld = static_cast<double>(ell);
	c.l0 = -std::sqrt(rd * kd);
	if (variant == SparsifierVariant::SpectralSpectral) {
		c.delta_U = (1.0 + std::sqrt(eld / rd)) / (1.0 - std::sqrt(kd / rd));
		c.u0 = c.delta_U * std::sqrt(eld * rd);
	} else {
		c.delta_U = sum_a_norm2 / (1.0 - std::sqrt(kd / rd));
		c.u0 = 0.0;
	}
	return c;
}

namespace detail {

// --- upper-side evaluators --------------------------------------------------
// Each evaluator scores every candidate against the current upper barrier and
// applies the chosen update. prepare() is called once per step; score() must
// be safe to call concurrently for distinct candidates.

struct GenericUpperSide {
	const Matrix* rows = nullptr;  // n x ell
	Matrix WU;                     // n x ell, row i = Q_B^T u_i
	Vector mu;                     // ascending eigenvalues of B_tau
	double shifted_wall = 0.0;
	double phi_diff = 0.0;

	void init_state(BarrierState& st, Index ell) const { st.B_tau = Matrix::Zero(ell, ell); }

	void prepare(const BarrierState& st, double delta_U) {
		const SymEig eig = sym_eig(st.B_tau);
		mu = eig.lambda;
		shifted_wall = st.u_tau + delta_U;
		const double phi_at = phi_upper_from(mu, st.u_tau, "dual_set_spectral");
		const double phi_shifted = phi_upper_from(mu, shifted_wall, "dual_set_spectral");
		phi_diff = phi_at - phi_shifted;
		if (!(phi_diff > 0.0))
			throw NumericalBreakdown("dual_set_spectral: upper potential did not decrease");
		WU = (*rows) * eig.Q;
	}

	double score(const BarrierState&, Index i) const {
		return u_score_from_transformed(WU, i, mu, shifted_wall, phi_diff);
	}

	void update(BarrierState& st, Index j, double t) const {
		st.B_tau += t * (rows->row(j).transpose() * rows->row(j));
	}

	double upper_extent(const BarrierState& st) const {
		return sym_eig(st.B_tau).lambda(st.B_tau.rows() - 1);
	}

	bool extent_ok(const BarrierState& st, double wall, double tol) const {
		return upper_extent(st) <= wall + tol;
	}
};

struct IdentityUpperSide {
	Index n = 0;
	Vector mu;  // stably sorted copy of the raw weights = spectrum of the implicit B
	double shifted_wall = 0.0;
	double phi_diff = 0.0;

	void init_state(BarrierState&, Index) const {}

	void prepare(const BarrierState& st, double delta_U) {
		// Mirrors the exactly-diagonal eigendecomposition the generic path
		// sees, so every downstream quantity is bit-identical to it.
		const std::vector<Index> perm = sort_permutation_ascending(st.s);
		mu.resize(st.s.size());
		for (Index j = 0; j < st.s.size(); ++j) mu(j) = st.s(perm[static_cast<std::size_t>(j)]);
		shifted_wall = st.u_tau + delta_U;
		const double phi_at = phi_upper_from(mu, st.u_tau, "dual_set_spectral");
		const double phi_shifted = phi_upper_from(mu, shifted_wall, "dual_set_spectral");
		phi_diff = phi_at - phi_shifted;
		if (!(phi_diff > 0.0))
			throw NumericalBreakdown("dual_set_spectral: upper potential did not decrease");
	}

	double score(const BarrierState& st, Index i) const {
		// Same arithmetic the generic transformed-coordinate loop performs on
		// a unit row: one nonzero term with weight 1.0.
		const double w2 = 1.0;
		const double d = shifted_wall - st.s(i);
		const double inv1 = w2 / d;
		const double inv2 = w2 / (d * d);
		return inv2 / phi_diff + inv1;
	}

	void update(BarrierState&, Index, double) const {}  // weights already carry the diagonal

	double upper_extent(const BarrierState& st) const { return st.s.maxCoeff(); }

	bool extent_ok(const BarrierState& st, double wall, double tol) const {
		return upper_extent(st) <= wall + tol;
	}
};

struct FrobeniusUpperSide {
	Vector norms2;       // ||a_i||^2 in input order
	Vector scores;       // constant per-candidate scores ||a_i||^2 / delta_U
	double total = 0.0;  // sum ||a_i||^2

	void init_from(const Matrix& arows, double delta_U) {
		norms2.resize(arows.rows());
		for (Index i = 0; i < arows.rows(); ++i) norms2(i) = arows.row(i).squaredNorm();
		scores.resize(arows.rows());
		if (delta_U > 0.0) {
			for (Index i = 0; i < arows.rows(); ++i) scores(i) = norms2(i) / delta_U;
		} else {
			scores.setZero();  // all a_i vanish: no upper-side pressure at all
		}
	}

	void init_state(BarrierState&, Index) const {}
	void prepare(const BarrierState&, double) const {}

	double score(const BarrierState&, Index i) const { return scores(i); }

	void update(BarrierState& st, Index j, double t) const { st.trace_B += t * norms2(j); }

	double upper_extent(const BarrierState& st) const { return st.trace_B; }

	bool extent_ok(const BarrierState& st, double wall, double tol) const {
		return st.trace_B <= wall + tol;
	}
};

// --- one greedy step ---------------------------------------------------------

struct StepResult {
	Index j = -1;
	double t = 0.0;
	double sum_U = 0.0;
	double sum_L = 0.0;
};

template <class UpperSide>
StepResult step_select(const BarrierState& st, const Constants& cons, const Matrix& V,
                       UpperSide& upper, bool want_sums, const char* who) {
	const Index n = V.rows();
	const SymEig eigA = sym_eig(st.A_tau);
	const double shifted_l = st.l_tau + cons.delta_L;
	const double phi_at = phi_lower_from(eigA.lambda, st.l_tau, who);
	const double phi_shifted = phi_lower_from(eigA.lambda, shifted_l, who);
	const double phi_diff_L = phi_shifted - phi_at;
	if (!(phi_diff_L > 0.0))
		throw NumericalBreakdown(std::string(who) + ": lower potential did not increase at step " +
		                         std::to_string(st.tau));
	const Matrix WV = V * eigA.Q;
	upper.prepare(st, cons.delta_U);

	Vector L(n), U(n);
	parallel_for(n, [&](std::ptrdiff_t i) {
		const Index idx = static_cast<Index>(i);
		L(idx) = l_score_from_transformed(WV, idx, eigA.lambda, shifted_l, phi_diff_L);
		U(idx) = upper.score(st, idx);
	});

	StepResult out;
	for (Index i = 0; i < n; ++i) {
		if (out.j < 0 && U(i) <= L(i) && U(i) + L(i) > 0.0) out.j = i;
	}
	if (out.j < 0)
		throw NumericalBreakdown(std::string(who) + ": no admissible index at step " +
		                         std::to_string(st.tau) + " (l=" + std::to_string(st.l_tau) +
		                         ", u=" + std::to_string(st.u_tau) + ")");
	out.t = 2.0 / (U(out.j) + L(out.j));
	if (want_sums) {
		for (Index i = 0; i < n; ++i) {
			out.sum_U += U(i);
			out.sum_L += L(i);
		}
	}
	return out;
}

// --- the full greedy run ------------------------------------------------------

template <class UpperSide>
WeightedSelection dual_set_engine(const Matrix& V, UpperSide& upper, Index ell, Index r,
                                  const Constants& cons, double upper_cap,
                                  const SparsifierOptions& opts, const char* who) {
	const Index n = V.rows();
	const Index k = V.cols();
	if (!(k >= 1 && k < r && r <= n))
		throw InvalidInput(std::string(who) + ": need 1 <= k < r <= n");
	{
		const Matrix G = V.transpose() * V - Matrix::Identity(k, k);
		if (G.cwiseAbs().maxCoeff() > 1e-6)
			throw InvalidInput(std::string(who) + ": rows of V are not a decomposition of the identity");
	}

	BarrierState st;
	st.s = Vector::Zero(n);
	st.A_tau = Matrix::Zero(k, k);
	st.l_tau = cons.l0;
	st.u_tau = cons.u0;
	upper.init_state(st, ell);

	const bool check = opts.check_invariants || opts.trace != nullptr;
	const double target_avg = 1.0 - std::sqrt(static_cast<double>(k) / static_cast<double>(r));

	for (Index step = 0; step < r; ++step) {
		const StepResult sel = step_select(st, cons, V, upper, check, who);
		if (opts.check_invariants) {
			if (sel.sum_U > target_avg + 1e-6 || sel.sum_L < target_avg - 1e-6)
				throw NumericalBreakdown(std::string(who) + ": averaging invariant violated at step " +
				                         std::to_string(step) + " (sum_U=" + std::to_string(sel.sum_U) +
				                         ", sum_L=" + std::to_string(sel.sum_L) + ")");
		}
		const double l_before = st.l_tau;
		const double u_before = st.u_tau;
		st.s(sel.j) += sel.t;
		st.A_tau += sel.t * (V.row(sel.j).transpose() * V.row(sel.j));
		upper.update(st, sel.j, sel.t);
		st.l_tau += cons.delta_L;
		st.u_tau += cons.delta_U;
		st.tau += 1;
		if (check) {
			const double lam_min = sym_eig(st.A_tau).lambda(0);
			const double extent = upper.upper_extent(st);
			if (opts.check_invariants) {
				if (lam_min < st.l_tau - 1e-8)
					throw NumericalBreakdown(std::string(who) + ": lower barrier crossed at step " +
					                         std::to_string(step));
				const double utol = std::max(1e-8, 1e-8 * std::abs(st.u_tau));
				if (!upper.extent_ok(st, st.u_tau, utol))
					throw NumericalBreakdown(std::string(who) + ": upper barrier crossed at step " +
					                         std::to_string(step));
			}
			if (opts.trace) {
				StepTrace tr;
				tr.tau = step;
				tr.l = l_before;
				tr.u = u_before;
				tr.chosen = sel.j;
				tr.t = sel.t;
				tr.sum_U = sel.sum_U;
				tr.sum_L = sel.sum_L;
				tr.lambda_min_A = lam_min;
				tr.upper_extent = extent;
				opts.trace->push_back(tr);
			}
		}
	}

	const double scale = (1.0 - std::sqrt(static_cast<double>(k) / static_cast<double>(r))) /
	                     static_cast<double>(r);
	WeightedSelection out;
	out.weights = st.s * scale;
	for (Index i = 0; i < n; ++i)
		if (out.weights(i) > 0.0) out.support.push_back(i);

	// Guaranteed output bounds, verified on every run (cheap at these sizes).
	const double lower_target = target_avg * target_avg;
	const double lam_min_scaled = scale * sym_eig(st.A_tau).lambda(0);
	if (lam_min_scaled < lower_target - 1e-8)
		throw NumericalBreakdown(std::string(who) + ": output lower bound violated");
	const double extent_scaled = scale * upper.upper_extent(st);
	if (extent_scaled > upper_cap + std::max(1e-8, 1e-8 * upper_cap))
		throw NumericalBreakdown(std::string(who) + ": output upper bound violated");
	return out;
}

}  // namespace detail

/// One selection step from an externally held state: the smallest admissible
/// index and its weight.
struct SelectionStep {
	Index j = -1;
	double t = 0.0;
};

inline SelectionStep select_index_and_weight(const BarrierState& state, const Constants& cons,
                                             const Matrix& V, const Matrix& Urows) {
	detail::GenericUpperSide upper;
	upper.rows = &Urows;
	if (state.B_tau.rows() != Urows.cols())
		throw InvalidInput("select_index_and_weight: state does not carry a matching B accumulation");
	const detail::StepResult res =
		detail::step_select(state, cons, V, upper, false, "select_index_and_weight");
	return {res.j, res.t};
}

inline SelectionStep select_index_and_weight(const BarrierState& state, const Constants& cons,
                                             const Matrix& V, IdentityRows) {
	detail::IdentityUpperSide upper;
	upper.n = V.rows();
	const detail::StepResult res =
		detail::step_select(state, cons, V, upper, false, "select_index_and_weight");
	return {res.j, res.t};
}

inline SelectionStep select_index_and_weight(const BarrierState& state, const Constants& cons,
                                             const Matrix& V, FrobeniusRows a) {
	detail::FrobeniusUpperSide upper;
	upper.init_from(*a.rows, cons.delta_U);
	const detail::StepResult res =
		detail::step_select(state, cons, V, upper, false, "select_index_and_weight");
	return {res.j, res.t};
}

/**
 * @brief Dual-set sparsification with two decompositions of the identity.
 *
 * V is n x k and Urows n x ell, both with (near-)orthonormal columns
 * (checked to 1e-6 max deviation). Returns at most r positive weights with
 * lambda_k(sum s_i v_i v_i^T) >= (1-sqrt(k/r))^2 and
 * lambda_1(sum s_i u_i u_i^T) <= (1+sqrt(ell/r))^2.
 */
inline WeightedSelection dual_set_spectral(const Matrix& V, const Matrix& Urows, Index r,
                                           const SparsifierOptions& opts = {}) {
	if (Urows.rows() != V.rows())
		throw InvalidInput("dual_set_spectral: V and U row counts differ");
	const Index ell = Urows.cols();
	if (ell < 1) throw InvalidInput("dual_set_spectral: U needs at least one column");
	{
		const Matrix G = Urows.transpose() * Urows - Matrix::Identity(ell, ell);
		if (G.cwiseAbs().maxCoeff() > 1e-6)
			throw InvalidInput("dual_set_spectral: rows of U are not a decomposition of the identity");
	}
	const Constants cons = make_constants(SparsifierVariant::SpectralSpectral, V.cols(), ell, r);
	const double root = 1.0 + std::sqrt(static_cast<double>(ell) / static_cast<double>(r));
	detail::GenericUpperSide upper;
	upper.rows = &Urows;
	return detail::dual_set_engine(V, upper, ell, r, cons, root * root, opts, "dual_set_spectral");
}

/// Same contract with the upper side fixed to the standard basis of R^n
/// (ell = n). Runs in O(n) extra work per step instead of an n x n
/// eigendecomposition, with output bit-identical to the generic path.
inline WeightedSelection dual_set_spectral(const Matrix& V, IdentityRows id, Index r,
                                           const SparsifierOptions& opts = {}) {
	if (id.n != V.rows()) throw InvalidInput("dual_set_spectral: identity side size mismatch");
	const Index ell = id.n;
	const Constants cons = make_constants(SparsifierVariant::SpectralSpectral, V.cols(), ell, r);
	const double root = 1.0 + std::sqrt(static_cast<double>(ell) / static_cast<double>(r));
	detail::IdentityUpperSide upper;
	upper.n = id.n;
	return detail::dual_set_engine(V, upper, ell, r, cons, root * root, opts, "dual_set_spectral");
}

/**
 * @brief Dual-set sparsification against arbitrary upper-side vectors.
 *
 * Arows is n x ell with arbitrary rows a_i. The upper side controls the trace:
 * trace(sum s_i a_i a_i^T) <= sum ||a_i||^2 (within 1e-8 relative), while the
 * lower-side guarantee matches dual_set_spectral. The per-candidate upper
 * score is constant across steps, so no upper eigendecomposition is needed.
 */
inline WeightedSelection dual_set_spectral_frobenius(const Matrix& V, const Matrix& Arows, Index r,
                                                     const SparsifierOptions& opts = {}) {
	if (Arows.rows() != V.rows())
		throw InvalidInput("dual_set_spectral_frobenius: V and A row counts differ");
	if (Arows.cols() < 1) throw InvalidInput("dual_set_spectral_frobenius: empty a-side rows");
	require_finite(Arows, "dual_set_spectral_frobenius");
	double total = 0.0;
	for (Index i = 0; i < Arows.rows(); ++i) total += Arows.row(i).squaredNorm();
	const Constants cons =
		make_constants(SparsifierVariant::SpectralFrobenius, V.cols(), Arows.cols(), r, total);
	detail::FrobeniusUpperSide upper;
	upper.init_from(Arows, cons.delta_U);
	return detail::dual_set_engine(V, upper, Arows.cols(), r, cons, total, opts,
	                               "dual_set_spectral_frobenius");
}

}  // namespace cssel
