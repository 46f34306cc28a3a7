/*
 * Copyright 2026 The qpaero Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the qpaero QuadPlane modelling engine.
 *
 * Every call returns a qpa_status. On failure the message of the most recent
 * error on the calling thread is available from qpa_last_error() and, as a
 * JSON object, from qpa_last_error_json(). Strings handed out through char**
 * are owned by the caller and released with qpa_string_free().
 *
 * Handles are immutable after creation and may be shared between threads.
 */

#ifndef QPAERO_QPAERO_H_
#define QPAERO_QPAERO_H_

#include <stddef.h>

#if defined(QPA_BUILDING_LIBRARY)
#define QPA_API __attribute__((visibility("default")))
#else
#define QPA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qpa_status {
  QPA_OK = 0,
  QPA_ERR_DOMAIN = 1,
  QPA_ERR_CONTRACT = 2,
  QPA_ERR_UNSUPPORTED_REGION = 3,
  QPA_ERR_STALL = 4,
  QPA_ERR_SINGULAR = 5,
  QPA_ERR_INFEASIBLE = 6,
  QPA_ERR_FORMAT = 7,
  QPA_ERR_SEQUENCING = 8,
  QPA_ERR_OUT_OF_ENVELOPE = 9,
  QPA_ERR_BUILD = 10,
  QPA_ERR_IO = 11,
  QPA_ERR_INVALID_ARGUMENT = 12,
  QPA_ERR_INTERNAL = 13
} qpa_status;

typedef enum qpa_mode {
  QPA_MODE_QUAD = 0,
  QPA_MODE_HYBRID = 1,
  QPA_MODE_PLANE = 2
} qpa_mode;

typedef struct qpa_database qpa_database;
typedef struct qpa_mesh qpa_mesh;

typedef struct qpa_condition {
  qpa_mode mode;
  double alpha_deg;
  double airspeed;        /* m/s */
  double esc_fwd;         /* us */
  double esc_quad;        /* us */
  double aileron;         /* -1..1 */
  double elevator;
  double rudder;
  double pitch_thrust_split; /* N per vertical motor */
} qpa_condition;

typedef struct qpa_wrench {
  double fx, fy, fz; /* N, body FRD, weight excluded */
  double mx, my, mz; /* N*m */
} qpa_wrench;

QPA_API const char* qpa_version(void);
QPA_API const char* qpa_status_name(qpa_status status);
QPA_API const char* qpa_last_error(void);
QPA_API const char* qpa_last_error_json(void);
QPA_API void qpa_string_free(char* s);

/* Idle-initialized condition (plane mode, ESCs at 1000 us). */
QPA_API qpa_condition qpa_condition_default(void);

/* Databases. */
QPA_API qpa_status qpa_database_builtin(qpa_database** out);
/* $QPAERO_DB when set, otherwise the built-in tables. */
QPA_API qpa_status qpa_database_default(qpa_database** out);
QPA_API qpa_status qpa_database_load(const char* path, qpa_database** out);
QPA_API qpa_status qpa_database_from_json(const char* text, qpa_database** out);
QPA_API void qpa_database_free(qpa_database* db);
QPA_API qpa_status qpa_database_to_json(const qpa_database* db, char** out);
QPA_API qpa_status qpa_database_checksum(const qpa_database* db, char** out);

/* Scalar evaluation. */
QPA_API qpa_status qpa_reynolds(double airspeed, double chord,
                                double kinematic_viscosity, double* out);
QPA_API qpa_status qpa_dynamic_thrust(const qpa_database* db, double alpha_p_deg,
                                      double airspeed, double esc_us, double* out);
QPA_API qpa_status qpa_invert_thrust(const qpa_database* db, double alpha_p_deg,
                                     double airspeed, double thrust,
                                     double* esc_us);
QPA_API qpa_status qpa_total_wrench(const qpa_database* db,
                                    const qpa_condition* condition,
                                    qpa_wrench* out);

/* Interpolation meshes. `coefficient` is one of cl, cdp, cdq, cdq2, cdpf, cm,
 * mdt, cmde, crm_da, crm_dr, cym_da, cym_dr, csf0, csf_dr. */
QPA_API qpa_status qpa_mesh_build(const qpa_database* db, qpa_mode mode,
                                  const char* coefficient, qpa_mesh** out);
QPA_API void qpa_mesh_free(qpa_mesh* mesh);
QPA_API qpa_status qpa_mesh_interp(const qpa_mesh* mesh, double alpha_deg,
                                   double airspeed, double* out);
/* Containing triangle and its plane a*alpha + b*V + c*C + d = 0. */
QPA_API qpa_status qpa_mesh_locate(const qpa_mesh* mesh, double alpha_deg,
                                   double airspeed, size_t* triangle,
                                   double plane[4]);
QPA_API qpa_status qpa_mesh_to_json(const qpa_mesh* mesh, char** out);

/*
 * Batch commands. `request` is a JSON object; the reply is JSON or CSV as
 * selected by the request's "format" member. `flagged` (optional) is set to
 * 1 when the result contains an infeasible trim, envelope point or rejected
 * input row. Commands: eval, fit, reduce, trim, transition, envelope, mesh,
 * synth, db_export, db_checksum.
 */
QPA_API qpa_status qpa_command(const qpa_database* db, const char* command,
                               const char* request, char** out, int* flagged);

#ifdef __cplusplus
}
#endif

#endif /* QPAERO_QPAERO_H_ */
