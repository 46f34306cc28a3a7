// Copyright 2026 The qpaero Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Self-describing coefficient database: vehicle profile, atmosphere, thrust
// map and aero suite in one JSON document.
//
// Per-airspeed tables (form drag, C_M, elevator, lateral) carry no mode
// field when they apply to every mode at that airspeed; a row with an
// explicit "mode" overrides the shared row for that mode only.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpaero/aero.hpp"
#include "qpaero/core.hpp"
#include "qpaero/propulsion.hpp"

namespace qpaero {

inline constexpr int kDatabaseSchemaVersion = 1;
inline constexpr const char* kBuiltinDatabaseName = "quadplane-v1";
inline constexpr const char* kBuiltinProvenance = "paper-tables-v1";
// Environment variable naming the default database file.
inline constexpr const char* kDatabaseEnvVar = "QPAERO_DB";

struct CoefficientDatabase {
  int schema_version = kDatabaseSchemaVersion;
  std::string name;
  std::string provenance;  // "paper-tables-v1" or a fit-report id
  std::vector<std::string> notes;
  VehicleGeometry vehicle;
  Atmosphere atmosphere;
  ThrustMap thrust_map;
  AeroModel aero;
};

// The shipped vehicle with Tables 1 and 4-14 verbatim.
const CoefficientDatabase& BuiltinDatabase();

std::string DatabaseToJson(const CoefficientDatabase& db);
// Throws Error(kFormat) on schema problems, Error(kBuild) on incomplete grids.
CoefficientDatabase DatabaseFromJson(const std::string& text);

CoefficientDatabase LoadDatabase(const std::string& path);
void SaveDatabase(const CoefficientDatabase& db, const std::string& path);

// $QPAERO_DB when set, otherwise the built-in profile.
CoefficientDatabase DefaultDatabase();

// FNV-1a 64 over the canonical serialization of the thrust map and aero
// sections. Rendered as 16 lowercase hex digits.
std::string DatabaseChecksum(const CoefficientDatabase& db);

}  // namespace qpaero
