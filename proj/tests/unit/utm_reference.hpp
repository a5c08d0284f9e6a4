#pragma once

namespace testing_support {

struct Reference {
  double lat, lon;
  int zone;
  double easting, northing, convergence;
};

// Forward projections from an independent implementation (PROJ).
inline constexpr Reference kReference[] = {
    {35.1175, -89.9711, 16, 229228.973380, 3890114.197937, -1.7101799499},
    {0.0, 3.0, 31, 500000.000000, 0.000000, 0.0},
    {45.0, 9.0, 32, 500000.000000, 4982950.400227, 0.0},
    {-33.8688, 151.2093, 56, 334368.633648, 6250948.345385, 0.9981718559},
    {83.9, -179.5, 1, 470349.553143, 9317573.468215, -2.4858626718},
    {-83.9, 179.9, 60, 534390.831270, 682204.246668, -2.8836078362},
    {60.1699, 24.9384, 35, 385611.316686, 6672118.380325, -1.7886386850},
    {35.1175, -87.0, 16, 500000.000000, 3886073.494248, 0.0},
    {10.5, -66.9, 19, 729838.386887, 1161462.927691, 0.3828636198},
    {51.4779, -0.0015, 30, 708213.494972, 5707235.660473, 2.3467677588},
    {51.4779, -0.0015, 31, 291578.230054, 5707244.200222, -2.3491173787},
    {-0.0001, 33.0, 36, 500000.000000, 9999988.946995, 0.0},
    {75.241381, -57.631059, 21, 482055.425096, 8350634.439646, -0.6102404703},
    {-71.830704, -158.784708, 4, 507492.950588, 2029937.503164, -0.2045574820},
    {13.908385, -36.541776, 24, 765642.925874, 1538964.565520, 0.5912319362},
    {-77.700729, -99.398126, 14, 490532.764313, 1374996.717627, 0.3889886098},
    {-43.568616, -152.693716, 5, 524733.271584, 5175992.651029, -0.2110989744},
    {54.911157, -161.257188, 4, 355304.807200, 6087237.812539, -1.8472882761},
    {21.945154, -92.502019, 15, 551422.230976, 2426839.809395, 0.1861090045},
    {12.953295, -159.619917, 4, 432761.619574, 1432052.339813, -0.1389638084},
};

}  // namespace testing_support
