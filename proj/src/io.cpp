#include "flatlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace flatlab {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ostringstream out;
  out << m.rows() << "," << m.cols() << "\n";
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out << ",";
      out << fmt_double(m(i, j));
    }
    out << "\n";
  }
  write_text_file(path, out.str());
}

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open matrix file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw validation_error("matrix file '" + path + "' is empty");
  int rows = 0, cols = 0;
  if (std::sscanf(line.c_str(), "%d,%d", &rows, &cols) != 2 || rows < 1 || cols < 1)
    throw validation_error("matrix file '" + path + "': malformed header (want rows,cols)");
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!std::getline(in, line))
      throw validation_error("matrix file '" + path + "': missing row " + std::to_string(i + 1));
    std::istringstream ls(line);
    std::string cell;
    for (int j = 0; j < cols; ++j) {
      if (!std::getline(ls, cell, ','))
        throw validation_error("matrix file '" + path + "': row " + std::to_string(i + 1) +
                               " has fewer than " + std::to_string(cols) + " entries");
      try {
        m(i, j) = std::stod(cell);
      } catch (const std::exception&) {
        throw validation_error("matrix file '" + path + "': bad number '" + cell + "'");
      }
    }
  }
  return m;
}

void write_profile_csv(const std::string& path, const FlatnessProfile& p) {
  std::ostringstream out;
  int n = static_cast<int>(p.base.size());
  out << "r,fcirc";
  for (int i = 0; i < n; ++i) out << ",w" << i + 1;
  out << "\n";
  for (size_t i = 0; i < p.radii.size(); ++i) {
    out << fmt_double(p.radii[i]) << "," << fmt_double(p.values[i]);
    for (int j = 0; j < n; ++j) out << "," << fmt_double(p.witnesses[i][j]);
    out << "\n";
  }
  out << "ell,fbar\n";
  for (size_t i = 0; i < p.dual_levels.size(); ++i)
    out << fmt_double(p.dual_levels[i]) << "," << fmt_double(p.dual_values[i]) << "\n";
  write_text_file(path, out.str());
}

void write_trajectory_csv(const std::string& path, const TrajectoryRecord& tr, int dim) {
  std::ostringstream out;
  out << "t";
  for (int i = 0; i < dim; ++i) out << ",x" << i + 1;
  out << ",f,c,coeff\n";
  for (size_t i = 0; i < tr.times.size(); ++i) {
    out << fmt_double(tr.times[i]);
    for (int j = 0; j < dim; ++j) out << "," << fmt_double(tr.states[i][j]);
    out << "," << fmt_double(tr.f_values[i]);
    out << "," << fmt_double(i < tr.c_values.size() ? tr.c_values[i] : std::nan(""));
    out << "," << fmt_double(i < tr.coeff_values.size() ? tr.coeff_values[i] : std::nan(""));
    out << "\n";
  }
  write_text_file(path, out.str());
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw validation_error("cannot write file '" + path + "'");
  out << content;
  if (!out) throw validation_error("write failed for '" + path + "'");
}

}  // namespace flatlab
