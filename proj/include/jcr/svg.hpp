#pragma once

#include <string>
#include <vector>

namespace jcr {

/// Minimal deterministic line plot. Series are drawn as polylines over a
/// linear x/y mapping; non-finite samples split the line. Output depends only
/// on the data, so identical inputs render identical bytes.
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string x_label, std::string y_label);

  void add_series(const std::string& name, const std::vector<double>& xs,
                  const std::vector<double>& ys);

  /// Extra emphasized samples (drawn as circles in the series palette).
  void add_markers(const std::string& name, const std::vector<double>& xs,
                   const std::vector<double>& ys);

  bool empty() const;
  std::string render() const;

 private:
  struct Series {
    std::string name;
    std::vector<double> xs, ys;
    bool markers_only = false;
  };

  std::string title_, x_label_, y_label_;
  std::vector<Series> series_;
};

}  // namespace jcr
