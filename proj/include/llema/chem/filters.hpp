#pragma once

#include "llema/crystal/structure.hpp"
#include "llema/tasks/task.hpp"

namespace llema::chem {

// True iff every containment, exclusion and abundance filter of the task holds.
inline bool composition_passes_filters(const crystal::Structure& s, const Task& task) {
  return llema::composition_passes_filters(s.composition(), task);
}

}  // namespace llema::chem
