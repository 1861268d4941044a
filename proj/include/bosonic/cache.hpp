#pragma once

#include <map>
#include <memory>
#include <mutex>

namespace bosonic {

// Insertion-only memo table; the first stored value for a key wins.
template <class Key, class Value>
class Memo {
public:
    template <class Fn>
    std::shared_ptr<const Value> get(const Key& key, Fn&& compute) {
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = table_.find(key);
            if (it != table_.end()) return it->second;
        }
        auto value = std::make_shared<const Value>(compute());
        std::lock_guard<std::mutex> lock(mu_);
        return table_.emplace(key, value).first->second;
    }

private:
    std::mutex mu_;
    std::map<Key, std::shared_ptr<const Value>> table_;
};

}  // namespace bosonic
