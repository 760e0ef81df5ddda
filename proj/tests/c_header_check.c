/* Copyright 2026 The qpotts Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* Compiled as C to keep the public header free of C++. */

#include "qpotts/qpotts.h"

int c_header_energy(double* out) {
  qp_patterns* patterns = NULL;
  int config[4];
  int i;
  qp_status status = qp_patterns_generate(4, 1, 3, 5, &patterns);
  if (status != QP_OK) return (int)status;
  for (i = 0; i < 4; ++i) {
    status = qp_patterns_exponent(patterns, i, 0, &config[i]);
    if (status != QP_OK) break;
  }
  if (status == QP_OK) status = qp_classical_energy(patterns, config, 4, out);
  qp_patterns_free(patterns);
  return (int)status;
}
