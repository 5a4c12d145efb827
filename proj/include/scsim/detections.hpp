#ifndef SCSIM_DETECTIONS_HPP
#define SCSIM_DETECTIONS_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "scsim/encoder.hpp"

namespace scsim {

/// One per-frame single-modality detection confidence, as produced upstream
/// by whatever detector feeds the fusion stage.
struct DetectionRecord {
    std::string frame_id;
    std::string modality;  // e.g. "rgb", "thermal"
    std::string object_id;
    double confidence = 0.0;
};

/// Reads `frame_id,modality,object_id,confidence` CSV (header required).
/// Malformed rows and out-of-range confidences raise ValidationError with the
/// line number; duplicate (frame, modality, object) keys are rejected.
std::vector<DetectionRecord> read_detections_csv(std::istream& in,
                                                 const std::string& filename = "<input>");

struct ObjectFusion {
    std::string frame_id;
    std::string object_id;
    std::map<std::string, double> modal_confidence;  // missing modality -> 0.5 filler
    std::set<std::string> observed_modalities;       // modalities with a real record
    double fused_analytic = 0.0;
    double fused = 0.0;  // simulated
    bool detected = false;
    bool flagged = false;  // fusion degenerate for this object; not counted
    std::string flag_reason;
};

struct FusionBatchReport {
    std::vector<ObjectFusion> objects;  // sorted by (frame_id, object_id)
    std::set<std::string> modalities;
    std::map<std::string, std::size_t> modal_detections;  // per-modality count at threshold
    std::size_t fused_detections = 0;
    std::map<std::string, long long> detection_delta;  // fused minus each modality
    std::map<std::string, double> frame_latency_s;     // per frame
    double threshold = 0.5;
    std::size_t bits = 0;
    std::uint64_t seed = 0;
    LatentMode mode = LatentMode::Ideal;
    std::size_t records_in = 0;

    std::string to_json() const;
    std::string to_csv() const;
};

/// Fuses every object's available modal confidences (absent modalities enter
/// as the uninformative 0.5). Per-object substreams derive deterministically
/// from the master seed, so results do not depend on processing order.
FusionBatchReport fuse_batch(const std::vector<DetectionRecord>& records, std::size_t bits,
                             std::uint64_t seed, LatentMode mode, double threshold,
                             const MemristorParams& params = {}, const OuParams& ou = {});

}  // namespace scsim

#endif
