// Copyright 2026 The dbf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "cli.hpp"
#include "dbf/config.hpp"

namespace dbf::cli
{
    std::string sha256_hex(std::string_view data)
    {
        unsigned char digest[EVP_MAX_MD_SIZE];
        unsigned int len = 0;
        if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
            throw std::runtime_error("sha256 digest failed");
        static constexpr char hex[] = "0123456789abcdef";
        std::string out;
        out.reserve(2 * len);
        for (unsigned int i = 0; i < len; ++i)
        {
            out.push_back(hex[digest[i] >> 4]);
            out.push_back(hex[digest[i] & 0xF]);
        }
        return out;
    }

    namespace
    {
        void write_file(const std::filesystem::path &path, std::string_view content)
        {
            std::ofstream os(path, std::ios::binary | std::ios::trunc);
            if (!os)
                throw std::runtime_error("cannot open '" + path.string() + "' for writing");
            os.write(content.data(), static_cast<std::streamsize>(content.size()));
            os.close();
            if (!os)
                throw std::runtime_error("failed writing '" + path.string() + "'");
        }
    }

    std::string to_key_value(const Manifest &manifest)
    {
        std::ostringstream os;
        os << "seed=" << manifest.seed << "\n";
        for (const auto &e : manifest.entries)
            os << e.file << "=" << e.sha256 << "\n";
        return os.str();
    }

    Manifest emit_reproduction_bundle(const ExperimentConfig &config, std::span<const OutputFile> results,
                                      const std::filesystem::path &outdir)
    {
        std::error_code ec;
        std::filesystem::create_directories(outdir, ec);
        if (ec)
            throw std::runtime_error("cannot create output directory '" + outdir.string() + "': " + ec.message());

        std::vector<OutputFile> files;
        files.push_back({std::string(resolved_config_name), to_config_text(config)});
        files.insert(files.end(), results.begin(), results.end());

        std::set<std::string> names;
        Manifest manifest;
        manifest.seed = config.seed;
        for (const auto &f : files)
        {
            if (f.name.empty() || f.name == manifest_name || !names.insert(f.name).second)
                throw std::runtime_error("invalid or duplicate output file name '" + f.name + "'");
            write_file(outdir / f.name, f.content);
            manifest.entries.push_back({f.name, sha256_hex(f.content)});
        }
        write_file(outdir / manifest_name, to_key_value(manifest));
        return manifest;
    }
}
