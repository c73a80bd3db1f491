#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bsmpc/bsm/svr.hpp"
#include "bsmpc/dataset/builder.hpp"
#include "bsmpc/dataset/references.hpp"
#include "bsmpc/nmpc/reference.hpp"

namespace bsmpc::dataset {

/// CSV with header e1..em,d1..dn, 17 significant digits.
void write_dataset(const std::vector<CycleRecord>& records, int m, int n, std::ostream& out);
void write_dataset(const std::vector<CycleRecord>& records, int m, int n, const std::string& path);

struct Dataset {
  int m = 0;
  int n = 0;
  std::vector<CycleRecord> records;
};

Dataset read_dataset(std::istream& in);
Dataset read_dataset(const std::string& path);

/// Feature matrix (rows x m) and target matrix (rows x n).
void to_matrices(const std::vector<CycleRecord>& records, bsm::RowMatrix& errors,
                 bsm::RowMatrix& deltas);

/// CSV with header r1..rm,v1..vn, one row per sampling instant.
void write_references(const nmpc::ReferenceTrack& refs, std::ostream& out);
void write_references(const nmpc::ReferenceTrack& refs, const std::string& path);
nmpc::ReferenceTrack read_references(std::istream& in, int m, int n);
nmpc::ReferenceTrack read_references(const std::string& path, int m, int n);

/// JSON provenance next to a dataset: seeds, noise, GA settings, and record
/// counts before and after skipped cycles.
void write_manifest(const std::string& path, const std::string& model,
                    const ReferenceGenConfig& refs, const DatasetConfig& cfg,
                    const std::vector<DatasetResult>& runs);

}  // namespace bsmpc::dataset
