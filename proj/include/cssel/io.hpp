#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <cssel/matrix.hpp>

namespace cssel {

namespace detail {

inline std::string format_g17(double x) {
	char buf[40];
	std::snprintf(buf, sizeof buf, "%.17g", x);
	return buf;
}

inline std::string lower(std::string s) {
	for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
	return s;
}

inline bool parse_double(const std::string& tok, double& out) {
	const char* s = tok.c_str();
	char* end = nullptr;
	out = std::strtod(s, &end);
	return end != s && *end == '\0';
}

inline void check_entries_finite(const Matrix& A, const std::string& what) {
	if (!A.allFinite()) throw IOFailure(what + ": non-finite entries in file");
}

}  // namespace detail

/**
 * @brief Matrix Market reader: "array real general" and
 * "coordinate real general" banners only; '%' comment lines are skipped.
 * Array data is stored column by column per the format definition.
 * Duplicate coordinate entries are summed.
 */
inline Matrix read_matrix_market(std::istream& in, const std::string& name = "matrix market input") {
	std::string line;
	if (!std::getline(in, line)) throw IOFailure(name + ": empty file");
	std::istringstream banner(line);
	std::string head, object, format, field, symmetry;
	banner >> head >> object >> format >> field >> symmetry;
	if (head != "%%MatrixMarket" || detail::lower(object) != "matrix")
		throw IOFailure(name + ": not a Matrix Market matrix file");
	format = detail::lower(format);
	field = detail::lower(field);
	symmetry = detail::lower(symmetry);
	if (field != "real" || symmetry != "general" || (format != "array" && format != "coordinate"))
		throw IOFailure(name + ": unsupported banner (only array/coordinate real general)");

	auto next_data_line = [&](std::string& out) {
		while (std::getline(in, out)) {
			std::size_t pos = out.find_first_not_of(" \t\r\n");
			if (pos == std::string::npos) continue;
			if (out[pos] == '%') continue;
			return true;
		}
		return false;
	};

	if (!next_data_line(line)) throw IOFailure(name + ": missing size line");
	std::istringstream size_line(line);
	long long m = 0, n = 0, nnz = 0;
	if (format == "array") {
		if (!(size_line >> m >> n) || m <= 0 || n <= 0) throw IOFailure(name + ": bad size line");
		Matrix A(m, n);
		for (long long j = 0; j < n; ++j) {
			for (long long i = 0; i < m; ++i) {
				if (!next_data_line(line)) throw IOFailure(name + ": truncated array data");
				std::istringstream entry(line);
				double v = 0.0;
				if (!(entry >> v)) throw IOFailure(name + ": bad array entry");
				A(i, j) = v;
			}
		}
		detail::check_entries_finite(A, name);
		return A;
	}
	if (!(size_line >> m >> n >> nnz) || m <= 0 || n <= 0 || nnz < 0)
		throw IOFailure(name + ": bad size line");
	Matrix A = Matrix::Zero(m, n);
	for (long long e = 0; e < nnz; ++e) {
		if (!next_data_line(line)) throw IOFailure(name + ": truncated coordinate data");
		std::istringstream entry(line);
		long long i = 0, j = 0;
		double v = 0.0;
		if (!(entry >> i >> j >> v) || i < 1 || i > m || j < 1 || j > n)
			throw IOFailure(name + ": bad coordinate entry");
		A(i - 1, j - 1) += v;
	}
	detail::check_entries_finite(A, name);
	return A;
}

/// Matrix Market writer. Array format by default; set coordinate=true for
/// the sparse triplet form. comments are emitted as '%' lines after the
/// banner. Values use 17 significant digits so a round trip is bit-exact.
inline void write_matrix_market(std::ostream& out, const Matrix& A,
                                const std::vector<std::string>& comments = {},
                                bool coordinate = false) {
	if (A.size() == 0) throw InvalidInput("write_matrix_market: empty matrix");
	if (!coordinate) {
		out << "%%MatrixMarket matrix array real general\n";
		for (const std::string& c : comments) out << "% " << c << "\n";
		out << A.rows() << " " << A.cols() << "\n";
		for (Index j = 0; j < A.cols(); ++j)
			for (Index i = 0; i < A.rows(); ++i) out << detail::format_g17(A(i, j)) << "\n";
		return;
	}
	Index nnz = 0;
	for (Index i = 0; i < A.rows(); ++i)
		for (Index j = 0; j < A.cols(); ++j)
			if (A(i, j) != 0.0) ++nnz;
	out << "%%MatrixMarket matrix coordinate real general\n";
	for (const std::string& c : comments) out << "% " << c << "\n";
	out << A.rows() << " " << A.cols() << " " << nnz << "\n";
	for (Index i = 0; i < A.rows(); ++i)
		for (Index j = 0; j < A.cols(); ++j)
			if (A(i, j) != 0.0)
				out << (i + 1) << " " << (j + 1) << " " << detail::format_g17(A(i, j)) << "\n";
}

/// CSV reader: comma separated, '.' decimal point, one matrix row per line.
/// Empty lines and '#'-prefixed comment lines are skipped; ragged rows are
/// rejected.
inline Matrix read_csv(std::istream& in, const std::string& name = "csv input") {
	std::vector<std::vector<double>> rows;
	std::string line;
	while (std::getline(in, line)) {
		if (!line.empty() && line.back() == '\r') line.pop_back();
		const std::size_t pos = line.find_first_not_of(" \t");
		if (pos == std::string::npos) continue;
		if (line[pos] == '#') continue;
		std::vector<double> row;
		std::string tok;
		std::istringstream fields(line);
		while (std::getline(fields, tok, ',')) {
			const std::size_t b = tok.find_first_not_of(" \t");
			const std::size_t e = tok.find_last_not_of(" \t");
			if (b == std::string::npos) throw IOFailure(name + ": empty field");
			double v = 0.0;
			if (!detail::parse_double(tok.substr(b, e - b + 1), v))
				throw IOFailure(name + ": bad numeric field '" + tok + "'");
			row.push_back(v);
		}
		if (row.empty()) throw IOFailure(name + ": empty row");
		if (!rows.empty() && row.size() != rows.front().size())
			throw IOFailure(name + ": ragged rows");
		rows.push_back(std::move(row));
	}
	if (rows.empty()) throw IOFailure(name + ": no data rows");
	Matrix A(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
	for (Index i = 0; i < A.rows(); ++i)
		for (Index j = 0; j < A.cols(); ++j)
			A(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
	detail::check_entries_finite(A, name);
	return A;
}

/// CSV writer, 17 significant digits. comments become '#' lines on top.
inline void write_csv(std::ostream& out, const Matrix& A,
                      const std::vector<std::string>& comments = {}) {
	if (A.size() == 0) throw InvalidInput("write_csv: empty matrix");
	for (const std::string& c : comments) out << "# " << c << "\n";
	for (Index i = 0; i < A.rows(); ++i) {
		for (Index j = 0; j < A.cols(); ++j) {
			if (j) out << ",";
			out << detail::format_g17(A(i, j));
		}
		out << "\n";
	}
}

namespace detail {

inline bool ends_with(const std::string& s, const std::string& suffix) {
	return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace detail

/// Reads a matrix file, sniffing the format: a Matrix Market banner wins,
/// anything else is parsed as CSV.
inline Matrix read_matrix_file(const std::string& path) {
	std::ifstream in(path);
	if (!in) throw IOFailure("cannot open '" + path + "' for reading");
	const int first = in.peek();
	if (first == '%') return read_matrix_market(in, path);
	return read_csv(in, path);
}

/// Writes a matrix file; extension picks the format (.mtx/.mm -> Matrix
/// Market array, .csv -> CSV, anything else is an error).
inline void write_matrix_file(const std::string& path, const Matrix& A,
                              const std::vector<std::string>& comments = {}) {
	std::ofstream out(path);
	if (!out) throw IOFailure("cannot open '" + path + "' for writing");
	const std::string lower_path = detail::lower(path);
	if (detail::ends_with(lower_path, ".mtx") || detail::ends_with(lower_path, ".mm"))
		write_matrix_market(out, A, comments);
	else if (detail::ends_with(lower_path, ".csv"))
		write_csv(out, A, comments);
	else
		throw IOFailure("unknown matrix file extension in '" + path + "' (use .mtx, .mm, or .csv)");
	if (!out) throw IOFailure("write to '" + path + "' failed");
}

}  // namespace cssel
