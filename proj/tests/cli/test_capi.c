/* The C interface used from C: handles, status codes, last-error text. */

#include <math.h>
#include <stdio.h>
#include <string.h>

#include "bergman_limits.h"

static int failures = 0;

#define EXPECT(cond)                                       \
  do {                                                     \
    if (!(cond)) {                                         \
      fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                          \
    }                                                      \
  } while (0)

int main(void) {
  bl_domain* disk = NULL;
  EXPECT(bl_domain_create("disk", &disk) == BL_OK);
  EXPECT(bl_domain_dim(disk) == 1);

  bl_domain* bad = NULL;
  EXPECT(bl_domain_create("annulus", &bad) == BL_PARSE);
  EXPECT(bad == NULL);
  EXPECT(strstr(bl_last_error(), "annulus") != NULL);

  const double z[2] = {0.3, 0.4}, w[2] = {-0.1, 0.5}, zero[2] = {0.0, 0.0};
  double h[2], r[2], d = 0.0;
  EXPECT(bl_h(disk, z, zero, h) == BL_OK);
  EXPECT(fabs(h[0] - 1.0) < 1e-15 && fabs(h[1]) < 1e-15);
  EXPECT(strlen(bl_last_error()) == 0);
  EXPECT(bl_phi(disk, z, z, r) == BL_OK);
  EXPECT(hypot(r[0], r[1]) < 1e-15);
  EXPECT(bl_distance(disk, z, w, &d) == BL_OK && d > 0.0);
  const double outside[2] = {1.5, 0.0};
  EXPECT(bl_h(disk, outside, zero, h) == BL_OUTSIDE_DOMAIN);

  bl_operator* tz = NULL;
  EXPECT(bl_toeplitz_create(disk, 0.0, 2.0, 20, "z", &tz) == BL_OK);
  EXPECT(bl_operator_size(tz) == 21);
  double norm = 0.0;
  EXPECT(bl_operator_norm(tz, &norm) == BL_OK && norm < 1.0 && norm > 0.9);
  double b[2];
  EXPECT(bl_berezin(tz, z, b) == BL_OK);
  EXPECT(fabs(b[0] - 0.3) < 1e-12 && fabs(b[1] - 0.4) < 1e-12);
  double pts[64];
  size_t count = 0;
  EXPECT(bl_berezin_shell(tz, 0.99, 0.99, 16, pts, 8, &count) == BL_OK);
  EXPECT(count == 32);
  EXPECT(fabs(hypot(pts[0], pts[1]) - 0.99) < 1e-9);

  bl_operator* bad_op = NULL;
  EXPECT(bl_toeplitz_create(disk, -3.0, 2.0, 4, "z", &bad_op) == BL_NOT_ADMISSIBLE);
  EXPECT(bl_toeplitz_create(disk, 0.0, 2.0, 4, "z +", &bad_op) == BL_PARSE);

  int code = -1;
  const char* summary = NULL;
  EXPECT(bl_run_command("{\"command\": \"spectrum\", \"nonsense\": 1}", &code, &summary) == BL_INVALID_ARGUMENT);
  EXPECT(code == 2);
  EXPECT(strstr(summary, "nonsense") != NULL);
  EXPECT(bl_run_command("not json", &code, &summary) == BL_PARSE);
  EXPECT(code == 2);

  bl_operator_free(tz);
  bl_domain_free(disk);
  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  return failures ? 1 : 0;
}
