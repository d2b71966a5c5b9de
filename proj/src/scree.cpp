#include "facpca/scree.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "facpca/error.hpp"
#include "facpca/format.hpp"

namespace facpca {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 420;
constexpr double kLeft = 70;
constexpr double kRight = 30;
constexpr double kTop = 50;
constexpr double kBottom = 60;

/// Smallest of 1, 2, 2.5, 5 times a power of ten that is >= x.
double nice_step(double x) {
  const double p = std::pow(10.0, std::floor(std::log10(x)));
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
    if (m * p >= x) return m * p;
  return 10 * p;
}

std::string px(double v) { return format_fixed(v, 2); }

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string scree_series(const std::vector<double>& eigenvalues) {
  std::ostringstream out;
  out << "index eigenvalue\n";
  for (std::size_t i = 0; i < eigenvalues.size(); ++i)
    out << (i + 1) << ' ' << format_sig(eigenvalues[i], 6) << '\n';
  return out.str();
}

std::string scree_svg(const std::vector<double>& eigenvalues, const std::string& title) {
  if (eigenvalues.empty()) throw Error(ErrorKind::Size, "scree plot needs at least one eigenvalue");
  const auto count = eigenvalues.size();
  const double top_value = std::max(*std::max_element(eigenvalues.begin(), eigenvalues.end()), 1e-12);
  const double step = nice_step(top_value / 5.0);
  const double y_max = step * std::ceil(top_value / step);

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto x_of = [&](std::size_t i) {
    return count == 1 ? kLeft + plot_w / 2
                      : kLeft + plot_w * static_cast<double>(i) / static_cast<double>(count - 1);
  };
  auto y_of = [&](double v) { return kTop + plot_h * (1.0 - std::max(v, 0.0) / y_max); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << px(kWidth / 2) << "\" y=\"28\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << escape_xml(title) << "</text>\n";

  // Axes.
  svg << "<g stroke=\"black\" stroke-width=\"1\">\n";
  svg << "<line x1=\"" << px(kLeft) << "\" y1=\"" << px(kTop) << "\" x2=\"" << px(kLeft)
      << "\" y2=\"" << px(kTop + plot_h) << "\"/>\n";
  svg << "<line x1=\"" << px(kLeft) << "\" y1=\"" << px(kTop + plot_h) << "\" x2=\""
      << px(kLeft + plot_w) << "\" y2=\"" << px(kTop + plot_h) << "\"/>\n";
  svg << "</g>\n";

  // Ticks and tick labels.
  svg << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  const auto y_ticks = static_cast<int>(std::lround(y_max / step));
  for (int t = 0; t <= y_ticks; ++t) {
    const double v = step * t;
    const double y = y_of(v);
    svg << "<line x1=\"" << px(kLeft - 5) << "\" y1=\"" << px(y) << "\" x2=\"" << px(kLeft)
        << "\" y2=\"" << px(y) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << px(kLeft - 8) << "\" y=\"" << px(y + 4) << "\" text-anchor=\"end\">"
        << format_sig(v, 4) << "</text>\n";
  }
  for (std::size_t i = 0; i < count; ++i) {
    const double x = x_of(i);
    svg << "<line x1=\"" << px(x) << "\" y1=\"" << px(kTop + plot_h) << "\" x2=\"" << px(x)
        << "\" y2=\"" << px(kTop + plot_h + 5) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << px(x) << "\" y=\"" << px(kTop + plot_h + 18)
        << "\" text-anchor=\"middle\">" << (i + 1) << "</text>\n";
  }
  svg << "</g>\n";

  // Axis labels.
  svg << "<text x=\"" << px(kLeft + plot_w / 2) << "\" y=\"" << px(kHeight - 15)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">Eigenvalue No.</text>\n";
  svg << "<text x=\"18\" y=\"" << px(kTop + plot_h / 2) << "\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 "
      << px(kTop + plot_h / 2) << ")\">Eigenvalue</text>\n";

  // Series.
  svg << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < count; ++i)
    svg << (i ? " " : "") << px(x_of(i)) << ',' << px(y_of(eigenvalues[i]));
  svg << "\"/>\n";
  for (std::size_t i = 0; i < count; ++i) {
    svg << "<circle cx=\"" << px(x_of(i)) << "\" cy=\"" << px(y_of(eigenvalues[i]))
        << "\" r=\"4\" fill=\"#1f77b4\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_scree(const std::vector<double>& eigenvalues, const std::filesystem::path& stem,
                const std::string& title) {
  const std::string svg = scree_svg(eigenvalues, title);
  auto txt_path = stem;
  txt_path += ".txt";
  auto svg_path = stem;
  svg_path += ".svg";
  write_file(txt_path, scree_series(eigenvalues));
  write_file(svg_path, svg);
}

}  // namespace facpca
