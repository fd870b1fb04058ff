#include "horocount/partition.hpp"

#include "horocount/errors.hpp"

#include <json.hpp>

#include <numeric>
#include <sstream>

namespace horocount {

Partition::Partition(int n, std::vector<int> block_sizes) : n_(n), sizes_(std::move(block_sizes)) {
    if (n_ <= 0) throw ValidationError("partition: n must be positive");
    if (sizes_.size() < 2)
        throw ValidationError("partition: fewer than two blocks (degenerate horocycle)");
    int total = 0;
    for (int s : sizes_) {
        if (s <= 0) throw ValidationError("partition: block sizes must be positive");
        total += s;
    }
    if (total != n_) {
        throw ValidationError("partition: block sizes sum to " + std::to_string(total) +
                              ", expected " + std::to_string(n_));
    }
    starts_.reserve(sizes_.size());
    owner_.reserve(static_cast<std::size_t>(n_));
    int start = 0;
    for (std::size_t k = 0; k < sizes_.size(); ++k) {
        starts_.push_back(start);
        for (int i = 0; i < sizes_[k]; ++i) owner_.push_back(static_cast<int>(k));
        start += sizes_[k];
    }
}

int Partition::block_of(int i) const {
    if (i < 0 || i >= n_) throw ValidationError("partition: index out of range");
    return owner_[static_cast<std::size_t>(i)];
}

int Partition::prefix_end(int k) const {
    if (k < 0 || k > num_blocks()) throw ValidationError("partition: prefix out of range");
    return k == num_blocks() ? n_ : starts_[static_cast<std::size_t>(k)];
}

std::vector<int> Partition::block_indices(int k) const {
    std::vector<int> out(static_cast<std::size_t>(block_size(k)));
    std::iota(out.begin(), out.end(), block_begin(k));
    return out;
}

int Partition::off_block_pairs() const {
    int total = 0;
    for (std::size_t s = 0; s < sizes_.size(); ++s)
        for (std::size_t t = s + 1; t < sizes_.size(); ++t) total += sizes_[s] * sizes_[t];
    return total;
}

int Partition::intra_block_pairs() const {
    int total = 0;
    for (int s : sizes_) total += s * (s - 1) / 2;
    return total;
}

std::string Partition::to_json() const { return nlohmann::json(sizes_).dump(); }

Partition Partition::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("partition: bad JSON: ") + e.what());
    }
    if (!j.is_array()) throw ValidationError("partition: JSON must be an array of block sizes");
    std::vector<int> sizes;
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw ValidationError("partition: block sizes must be integers");
        sizes.push_back(v.get<int>());
    }
    return Partition(std::accumulate(sizes.begin(), sizes.end(), 0), sizes);
}

Partition make_partition(int n, const std::vector<int>& block_sizes) { return Partition(n, block_sizes); }

std::vector<int> parse_block_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw ValidationError("blocks: empty entry in '" + text + "'");
        std::size_t used = 0;
        int value = 0;
        try {
            value = std::stoi(item, &used);
        } catch (const std::exception&) {
            throw ValidationError("blocks: not an integer: '" + item + "'");
        }
        if (used != item.size()) throw ValidationError("blocks: not an integer: '" + item + "'");
        out.push_back(value);
    }
    return out;
}

} // namespace horocount
