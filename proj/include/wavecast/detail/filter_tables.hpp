#pragma once

// Biorthogonal spline filter banks, all four filters zero-padded to a common
// even length per bank. Storage convention (fixed; see docs/formats.md):
//   dec_lo holds the analysis low-pass reversed; dec_hi[i] = (-1)^(i+1) * B[i];
//   rec_lo = B; rec_hi[i] = (-1)^i * A[i - rho], rho = 1 iff the true filter
//   lengths are odd. A = analysis-side low-pass, B = synthesis-side low-pass,
//   both symmetric and center-padded. dec_hi carries nd vanishing moments.

namespace wavecast::wavelet::detail {

inline constexpr double k_b1_1_dec_lo[2] = {0.70710678118654757, 0.70710678118654757};
inline constexpr double k_b1_1_dec_hi[2] = {-0.70710678118654757, 0.70710678118654757};
inline constexpr double k_b1_1_rec_lo[2] = {0.70710678118654757, 0.70710678118654757};
inline constexpr double k_b1_1_rec_hi[2] = {0.70710678118654757, -0.70710678118654757};

inline constexpr double k_b1_5_dec_lo[10] = {0, 0, 0, 0, 0.70710678118654757, 0.70710678118654757, 0, 0, 0, 0};
inline constexpr double k_b1_5_dec_hi[10] = {-0.016572815184059706, -0.016572815184059706, 0.12153397801643785, 0.12153397801643785, -0.70710678118654757, 0.70710678118654757, -0.12153397801643785, -0.12153397801643785, 0.016572815184059706, 0.016572815184059706};
inline constexpr double k_b1_5_rec_lo[10] = {0.016572815184059706, -0.016572815184059706, -0.12153397801643785, 0.12153397801643785, 0.70710678118654757, 0.70710678118654757, 0.12153397801643785, -0.12153397801643785, -0.016572815184059706, 0.016572815184059706};
inline constexpr double k_b1_5_rec_hi[10] = {0, -0, 0, -0, 0.70710678118654757, -0.70710678118654757, 0, -0, 0, -0};

inline constexpr double k_b2_8_dec_lo[18] = {0, 0, 0, 0, 0, 0, 0, 0, 0.35355339059327379, 0.70710678118654757, 0.35355339059327379, 0, 0, 0, 0, 0, 0, 0};
inline constexpr double k_b2_8_dec_hi[18] = {-0.0015105430506304422, -0.0030210861012608843, 0.012947511862546647, 0.028916109826354178, -0.052998481890690938, -0.13491307360773605, 0.16382918343409023, 0.46257144047591653, -0.95164212189717856, 0.46257144047591653, 0.16382918343409023, -0.13491307360773605, -0.052998481890690938, 0.028916109826354178, 0.012947511862546647, -0.0030210861012608843, -0.0015105430506304422, 0};
inline constexpr double k_b2_8_rec_lo[18] = {0.0015105430506304422, -0.0030210861012608843, -0.012947511862546647, 0.028916109826354178, 0.052998481890690938, -0.13491307360773605, -0.16382918343409023, 0.46257144047591653, 0.95164212189717856, 0.46257144047591653, -0.16382918343409023, -0.13491307360773605, 0.052998481890690938, 0.028916109826354178, -0.012947511862546647, -0.0030210861012608843, 0.0015105430506304422, 0};
inline constexpr double k_b2_8_rec_hi[18] = {0, -0, 0, -0, 0, -0, 0, -0, 0.35355339059327379, -0.70710678118654757, 0.35355339059327379, -0, 0, -0, 0, -0, 0, -0};

inline constexpr double k_b3_9_dec_lo[20] = {0, 0, 0, 0, 0, 0, 0, 0, 0.17677669529663689, 0.5303300858899106, 0.5303300858899106, 0.17677669529663689, 0, 0, 0, 0, 0, 0, 0, 0};
inline constexpr double k_b3_9_dec_hi[20] = {0.0006797443727836989, 0.0020392331183510968, -0.0050603192196119811, -0.020618912641105536, 0.014112787930175844, 0.09913478249423216, -0.012300136269419315, -0.32019196836077857, -0.0020500227115698858, 0.94212570067820678, -0.94212570067820678, 0.0020500227115698858, 0.32019196836077857, 0.012300136269419315, -0.09913478249423216, -0.014112787930175844, 0.020618912641105536, 0.0050603192196119811, -0.0020392331183510968, -0.0006797443727836989};
inline constexpr double k_b3_9_rec_lo[20] = {-0.0006797443727836989, 0.0020392331183510968, 0.0050603192196119811, -0.020618912641105536, -0.014112787930175844, 0.09913478249423216, 0.012300136269419315, -0.32019196836077857, 0.0020500227115698858, 0.94212570067820678, 0.94212570067820678, 0.0020500227115698858, -0.32019196836077857, 0.012300136269419315, 0.09913478249423216, -0.014112787930175844, -0.020618912641105536, 0.0050603192196119811, 0.0020392331183510968, -0.0006797443727836989};
inline constexpr double k_b3_9_rec_hi[20] = {0, -0, 0, -0, 0, -0, 0, -0, 0.17677669529663689, -0.5303300858899106, 0.5303300858899106, -0.17677669529663689, 0, -0, 0, -0, 0, -0, 0, -0};

inline constexpr double k_b6_8_dec_lo[18] = {0, 0, 0, 0, 0.014426282505622248, 0.014467504896774099, -0.078722001062668717, -0.040367979030381904, 0.41784910915032025, 0.75890772945376317, 0.41784910915032025, -0.040367979030381904, -0.078722001062668717, 0.014467504896774099, 0.014426282505622248, 0, 0, 0};
inline constexpr double k_b6_8_dec_hi[18] = {-0.0019088317364850261, -0.0019142861290808862, 0.016990639867607099, 0.011934565279726731, -0.049732903490937654, -0.077263173167211346, 0.094059203495761634, 0.42079628460983926, -0.82592299745843967, 0.42079628460983926, 0.094059203495761634, -0.077263173167211346, -0.049732903490937654, 0.011934565279726731, 0.016990639867607099, -0.0019142861290808862, -0.0019088317364850261, 0};
inline constexpr double k_b6_8_rec_lo[18] = {0.0019088317364850261, -0.0019142861290808862, -0.016990639867607099, 0.011934565279726731, 0.049732903490937654, -0.077263173167211346, -0.094059203495761634, 0.42079628460983926, 0.82592299745843967, 0.42079628460983926, -0.094059203495761634, -0.077263173167211346, 0.049732903490937654, 0.011934565279726731, -0.016990639867607099, -0.0019142861290808862, 0.0019088317364850261, 0};
inline constexpr double k_b6_8_rec_hi[18] = {0, -0, 0, -0, 0.014426282505622248, -0.014467504896774099, -0.078722001062668717, 0.040367979030381904, 0.41784910915032025, -0.75890772945376317, 0.41784910915032025, 0.040367979030381904, -0.078722001062668717, -0.014467504896774099, 0.014426282505622248, -0, 0, -0};

struct BankTable {
    const char* name;
    int nr;
    int nd;
    int filter_length;
    const double* dec_lo;
    const double* dec_hi;
    const double* rec_lo;
    const double* rec_hi;
};

inline constexpr BankTable k_bank_tables[5] = {
    {"bior1.1", 1, 1, 2, k_b1_1_dec_lo, k_b1_1_dec_hi, k_b1_1_rec_lo, k_b1_1_rec_hi},
    {"bior1.5", 1, 5, 10, k_b1_5_dec_lo, k_b1_5_dec_hi, k_b1_5_rec_lo, k_b1_5_rec_hi},
    {"bior2.8", 2, 8, 18, k_b2_8_dec_lo, k_b2_8_dec_hi, k_b2_8_rec_lo, k_b2_8_rec_hi},
    {"bior3.9", 3, 9, 20, k_b3_9_dec_lo, k_b3_9_dec_hi, k_b3_9_rec_lo, k_b3_9_rec_hi},
    {"bior6.8", 6, 8, 18, k_b6_8_dec_lo, k_b6_8_dec_hi, k_b6_8_rec_lo, k_b6_8_rec_hi},
};

}  // namespace wavecast::wavelet::detail
