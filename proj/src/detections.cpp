#include "scsim/detections.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

#include <json.hpp>

#include "scsim/bayes.hpp"
#include "scsim/errors.hpp"
#include "scsim/netlist.hpp"

namespace scsim {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

}  // namespace

std::vector<DetectionRecord> read_detections_csv(std::istream& in, const std::string& filename) {
    std::string line;
    int lineno = 0;
    if (!std::getline(in, line))
        throw ValidationError(filename + ": empty detection file");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "frame_id,modality,object_id,confidence")
        throw ValidationError(filename +
                              ":1: expected header `frame_id,modality,object_id,confidence`");

    std::vector<DetectionRecord> records;
    std::set<std::tuple<std::string, std::string, std::string>> keys;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        auto fail = [&](const std::string& msg) {
            return ValidationError(filename + ":" + std::to_string(lineno) + ": " + msg);
        };
        if (fields.size() != 4) throw fail("expected 4 fields, got " + std::to_string(fields.size()));
        DetectionRecord rec;
        rec.frame_id = fields[0];
        rec.modality = fields[1];
        rec.object_id = fields[2];
        if (rec.frame_id.empty() || rec.modality.empty() || rec.object_id.empty())
            throw fail("empty id field");
        char* end = nullptr;
        rec.confidence = std::strtod(fields[3].c_str(), &end);
        if (end == fields[3].c_str() || *end != '\0')
            throw fail("bad confidence literal `" + fields[3] + "`");
        if (!(rec.confidence >= 0.0 && rec.confidence <= 1.0))
            throw fail("confidence " + fields[3] + " outside [0,1]");
        if (!keys.insert({rec.frame_id, rec.modality, rec.object_id}).second)
            throw fail("duplicate record for (" + rec.frame_id + ", " + rec.modality + ", " +
                       rec.object_id + ")");
        records.push_back(std::move(rec));
    }
    return records;
}

FusionBatchReport fuse_batch(const std::vector<DetectionRecord>& records, std::size_t bits,
                             std::uint64_t seed, LatentMode mode, double threshold,
                             const MemristorParams& params, const OuParams& ou) {
    if (!(threshold >= 0.0 && threshold <= 1.0))
        throw ValidationError("detection threshold outside [0,1]");

    FusionBatchReport report;
    report.threshold = threshold;
    report.bits = bits;
    report.seed = seed;
    report.mode = mode;
    report.records_in = records.size();

    std::map<std::pair<std::string, std::string>, std::map<std::string, double>> grouped;
    for (const auto& rec : records) {
        report.modalities.insert(rec.modality);
        grouped[{rec.frame_id, rec.object_id}][rec.modality] = rec.confidence;
    }

    // Canonical modality order; a lone modality is fused against an
    // uninformative 0.5 companion so the operator is well-formed.
    std::vector<std::string> modal_order(report.modalities.begin(), report.modalities.end());

    for (const auto& [key, confs] : grouped) {
        ObjectFusion obj;
        obj.frame_id = key.first;
        obj.object_id = key.second;
        FusionInstance inst;
        for (const auto& m : modal_order) {
            auto it = confs.find(m);
            double c = it == confs.end() ? 0.5 : it->second;
            if (it != confs.end()) obj.observed_modalities.insert(m);
            obj.modal_confidence[m] = c;
            inst.modal_posteriors.push_back(c);
        }
        if (inst.modal_posteriors.size() < 2) inst.modal_posteriors.push_back(0.5);

        std::uint64_t obj_seed =
            derive_seed(seed, fnv1a(obj.frame_id + '\x1f' + obj.object_id));
        try {
            obj.fused_analytic = inst.analytic();
            obj.fused = fuse(inst, bits, obj_seed, mode, params, ou).posterior;
            obj.detected = obj.fused >= threshold;
        } catch (const DegenerateFusionError& e) {
            obj.flagged = true;
            obj.flag_reason = e.what();
        }

        if (obj.detected) ++report.fused_detections;
        for (const auto& [m, c] : confs)
            if (c >= threshold) ++report.modal_detections[m];
        report.objects.push_back(std::move(obj));
    }
    std::sort(report.objects.begin(), report.objects.end(),
              [](const ObjectFusion& a, const ObjectFusion& b) {
                  return std::tie(a.frame_id, a.object_id) < std::tie(b.frame_id, b.object_id);
              });

    for (const auto& m : modal_order) {
        std::size_t cnt = report.modal_detections.count(m) ? report.modal_detections[m] : 0;
        report.modal_detections[m] = cnt;
        report.detection_delta[m] =
            static_cast<long long>(report.fused_detections) - static_cast<long long>(cnt);
    }
    for (const auto& obj : report.objects)
        report.frame_latency_s[obj.frame_id] = frame_latency(bits, params);
    return report;
}

std::string FusionBatchReport::to_csv() const {
    std::ostringstream os;
    os << "frame_id,object_id";
    for (const auto& m : modalities) os << ',' << m;
    os << ",fused_analytic,fused,detected,flagged\n";
    for (const auto& obj : objects) {
        os << obj.frame_id << ',' << obj.object_id;
        for (const auto& m : modalities) os << ',' << format_double(obj.modal_confidence.at(m));
        if (obj.flagged)
            os << ",,," << 0 << ',' << 1 << '\n';
        else
            os << ',' << format_double(obj.fused_analytic) << ',' << format_double(obj.fused)
               << ',' << (obj.detected ? 1 : 0) << ',' << 0 << '\n';
    }
    return os.str();
}

std::string FusionBatchReport::to_json() const {
    nlohmann::json j;
    j["bits"] = bits;
    j["seed"] = seed;
    j["mode"] = mode == LatentMode::Ideal ? "ideal" : "device";
    j["threshold"] = threshold;
    j["records_in"] = records_in;
    j["objects_out"] = objects.size();
    j["fused_detections"] = fused_detections;
    for (const auto& [m, c] : modal_detections) j["modal_detections"][m] = c;
    for (const auto& [m, d] : detection_delta) j["detection_delta"][m] = d;
    for (const auto& [f, s] : frame_latency_s) j["frame_latency_s"][f] = s;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& obj : objects) {
        nlohmann::json o;
        o["frame_id"] = obj.frame_id;
        o["object_id"] = obj.object_id;
        for (const auto& [m, c] : obj.modal_confidence) {
            o["modal_confidence"][m] = c;
            o["observed"][m] = obj.observed_modalities.count(m) > 0;
        }
        if (obj.flagged) {
            o["flagged"] = true;
            o["flag_reason"] = obj.flag_reason;
        } else {
            o["fused_analytic"] = obj.fused_analytic;
            o["fused"] = obj.fused;
            o["detected"] = obj.detected;
        }
        arr.push_back(std::move(o));
    }
    j["objects"] = std::move(arr);
    return j.dump(2);
}

}  // namespace scsim
