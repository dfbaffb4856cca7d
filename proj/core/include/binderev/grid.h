// core/include/binderev/grid.h

// Copyright 2026  binderev contributors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef BINDEREV_GRID_H_
#define BINDEREV_GRID_H_

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace binderev {

// Dense bins x frames grid, row-major with one contiguous row per frequency
// bin.  Per-bin processing (WPE, band masking) walks rows linearly.
template <typename T>
class Grid {
 public:
  Grid() : bins_(0), frames_(0) {}
  Grid(std::size_t bins, std::size_t frames, T fill = T())
      : bins_(bins), frames_(frames), data_(bins * frames, fill) {}

  std::size_t bins() const { return bins_; }
  std::size_t frames() const { return frames_; }
  std::size_t size() const { return data_.size(); }

  T& at(std::size_t bin, std::size_t frame) {
    return data_[bin * frames_ + frame];
  }
  const T& at(std::size_t bin, std::size_t frame) const {
    return data_[bin * frames_ + frame];
  }

  T* row(std::size_t bin) { return data_.data() + bin * frames_; }
  const T* row(std::size_t bin) const { return data_.data() + bin * frames_; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool same_shape(const Grid& other) const {
    return bins_ == other.bins_ && frames_ == other.frames_;
  }

 private:
  std::size_t bins_;
  std::size_t frames_;
  std::vector<T> data_;
};

template <typename T>
inline void check_same_shape(const Grid<T>& a, const Grid<T>& b,
                             const char* where) {
  if (!a.same_shape(b))
    throw std::invalid_argument(std::string(where) + ": shape mismatch");
}

}  // namespace binderev

#endif  // BINDEREV_GRID_H_
