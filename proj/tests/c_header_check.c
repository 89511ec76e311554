/* Compiled as C to keep the public header free of C++. */
#include "nlsb/nlsb.h"

int nlsb_c_header_check(void) {
  nlsb_spec* spec = NULL;
  nlsb_profile* profile = NULL;
  double u0 = 0.0;
  int ok = 0;
  if (nlsb_spec_parse("1*s^3", &spec) != NLSB_OK) return 0;
  if (nlsb_shoot(spec, 1, 1.0, NULL, &profile) == NLSB_OK) {
    u0 = nlsb_profile_amplitude(profile);
    ok = u0 > 1.41421356 && u0 < 1.41421357;
  }
  nlsb_profile_free(profile);
  nlsb_spec_free(spec);
  return ok;
}
