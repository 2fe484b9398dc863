#pragma once

// Newform orbit sizes for prime levels r = 1 (mod 12) below 2000, with the odd
// values 1 + 2 * (sum over a subset of orbits) as printed alongside them.

#include <cstdint>
#include <vector>

namespace ssig::spectra {

struct Table1Row {
    std::uint64_t r;
    std::vector<unsigned> sizes;
    std::vector<unsigned> printed;
};

inline const std::vector<Table1Row> &table1_rows()
{
    static const std::vector<Table1Row> rows = {
        {13, {}, {1}},
        {37, {1, 1}, {1, 3, 5}},
        {61, {1, 3}, {1, 3, 7, 9}},
        {73, {1, 2, 2}, {1, 3, 5, 7, 9, 11}},
        {97, {3, 4}, {1, 7, 9, 15}},
        {109, {1, 3, 4}, {1, 3, 7, 9, 11, 15, 17}},
        {157, {5, 7}, {1, 11, 15, 25}},
        {181, {5, 9}, {1, 11, 19, 29}},
        {193, {2, 5, 8}, {1, 5, 11, 15, 17, 21, 27, 31}},
        {229, {1, 6, 11}, {1, 3, 13, 15, 23, 25, 35, 37}},
        {241, {7, 12}, {1, 15, 25, 39}},
        {277, {1, 3, 9, 9}, {1, 3, 7, 9, 19, 21, 25, 27, 37, 39, 43, 45}},
        {313, {2, 11, 12}, {1, 5, 23, 25, 27, 29, 47, 51}},
        {337, {12, 15}, {1, 25, 31, 55}},
        {349, {11, 17}, {1, 23, 35, 57}},
        {373, {1, 12, 17}, {1, 3, 25, 27, 35, 37, 59, 61}},
        {397, {2, 2, 5, 10, 13}, {1, 5, 9, 11, 15, 19, 21, 25, 27, 29, 31, 35, 37, 39, 41, 45, 47, 51, 55, 57, 61, 65}},
        {409, {13, 20}, {1, 27, 41, 67}},
        {421, {15, 19}, {1, 31, 39, 69}},
        {433, {1, 3, 15, 16}, {1, 3, 7, 9, 31, 33, 35, 37, 39, 41, 63, 65, 69, 71}},
        {457, {2, 15, 20}, {1, 5, 31, 35, 41, 45, 71, 75}},
        {541, {20, 24}, {1, 41, 49, 89}},
        {577, {2, 2, 3, 18, 22}, {1, 5, 7, 9, 11, 15, 37, 41, 43, 45, 47, 49, 51, 53, 55, 59, 81, 85, 87, 89, 91, 95}},
        {601, {20, 29}, {1, 41, 59, 99}},
        {613, {5, 18, 27}, {1, 11, 37, 47, 55, 65, 91, 101}},
        {661, {2, 23, 29}, {1, 5, 47, 51, 59, 63, 105, 109}},
        {673, {2, 4, 24, 25}, {1, 5, 9, 13, 49, 51, 53, 55, 57, 59, 61, 63, 99, 103, 107, 111}},
        {709, {1, 27, 30}, {1, 3, 55, 57, 61, 63, 115, 117}},
        {733, {1, 2, 25, 32}, {1, 3, 5, 7, 51, 53, 55, 57, 65, 67, 69, 71, 115, 117, 119, 121}},
        {757, {29, 33}, {1, 59, 67, 125}},
        {769, {27, 36}, {1, 55, 73, 127}},
        {829, {1, 28, 39}, {1, 3, 57, 59, 79, 81, 135, 137}},
        {853, {33, 37}, {1, 67, 75, 141}},
        {877, {2, 32, 38}, {1, 5, 65, 69, 77, 81, 141, 145}},
        {937, {34, 43}, {1, 69, 87, 155}},
        {997, {1, 1, 1, 4, 5, 5, 23, 42}, {1, 3, 5, 7, 9, 11, 13, 15, 17, 19, 21, 23, 25, 27, 29, 31, 33, 35, 47, 49, 51, 53, 55, 57, 59, 61, 63, 65, 67, 69, 71, 73, 75, 77, 79, 81, 85, 87, 89, 91, 93, 95, 97, 99, 101, 103, 105, 107, 109, 111, 113, 115, 117, 119, 131, 133, 135, 137, 139, 141, 143, 145, 147, 149, 151, 153, 155, 157, 159, 161, 163, 165}},
        {1009, {37, 46}, {1, 75, 93, 167}},
        {1021, {37, 47}, {1, 75, 95, 169}},
        {1033, {40, 45}, {1, 81, 91, 171}},
        {1069, {2, 4, 31, 51}, {1, 5, 9, 13, 63, 67, 71, 75, 103, 107, 111, 115, 165, 169, 173, 177}},
        {1093, {3, 43, 44}, {1, 7, 87, 89, 93, 95, 175, 181}},
        {1117, {43, 49}, {1, 87, 99, 185}},
        {1129, {43, 50}, {1, 87, 101, 187}},
        {1153, {1, 44, 50}, {1, 3, 89, 91, 101, 103, 189, 191}},
        {1201, {2, 46, 51}, {1, 5, 93, 97, 103, 107, 195, 199}},
        {1213, {48, 52}, {1, 97, 105, 201}},
        {1237, {48, 54}, {1, 97, 109, 205}},
        {1249, {7, 37, 59}, {1, 15, 75, 89, 119, 133, 193, 207}},
        {1297, {1, 51, 55}, {1, 3, 103, 105, 111, 113, 213, 215}},
        {1321, {1, 3, 49, 56}, {1, 3, 7, 9, 99, 101, 105, 107, 113, 115, 119, 121, 211, 213, 217, 219}},
        {1381, {51, 63}, {1, 103, 127, 229}},
        {1429, {54, 64}, {1, 109, 129, 237}},
        {1453, {57, 63}, {1, 115, 127, 241}},
        {1489, {57, 66}, {1, 115, 133, 247}},
        {1549, {1, 59, 68}, {1, 3, 119, 121, 137, 139, 255, 257}},
        {1597, {63, 69}, {1, 127, 139, 265}},
        {1609, {2, 58, 73}, {1, 5, 117, 121, 147, 151, 263, 267}},
        {1621, {1, 63, 70}, {1, 3, 127, 129, 141, 143, 267, 269}},
        {1657, {2, 63, 72}, {1, 5, 127, 131, 145, 149, 271, 275}},
        {1669, {63, 75}, {1, 127, 151, 277}},
        {1693, {3, 65, 72}, {1, 7, 131, 137, 145, 151, 275, 281}},
        {1741, {66, 78}, {1, 133, 157, 289}},
        {1753, {2, 66, 77}, {1, 5, 133, 137, 155, 159, 287, 291}},
        {1777, {68, 79}, {1, 137, 159, 295}},
        {1789, {68, 80}, {1, 137, 161, 297}},
        {1801, {68, 81}, {1, 137, 163, 299}},
        {1861, {68, 86}, {1, 137, 173, 309}},
        {1873, {1, 75, 79}, {1, 3, 151, 153, 159, 161, 309, 311}},
        {1933, {1, 76, 83}, {1, 3, 153, 155, 167, 169, 319, 321}},
        {1993, {77, 88}, {1, 155, 177, 331}},
    };
    return rows;
}

} // namespace ssig::spectra
