// smtkit/unicode_data.hpp
//
// Copyright 2026  smtkit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Generated by tools/gen_unicode_tables.py from Unicode 13.0.0 data.
// Do not edit by hand.

#pragma once

#include <cstdint>

namespace smtkit::unicode_data {

inline constexpr uint32_t kTableLimit = 0x1000;

struct DecompEntry { uint32_t cp; uint16_t offset; uint8_t length; };
inline constexpr DecompEntry kDecomp[] = {
    {0x00C0, 0, 2},
    {0x00C1, 2, 2},
    {0x00C2, 4, 2},
    {0x00C3, 6, 2},
    {0x00C4, 8, 2},
    {0x00C5, 10, 2},
    {0x00C7, 12, 2},
    {0x00C8, 14, 2},
    {0x00C9, 16, 2},
    {0x00CA, 18, 2},
    {0x00CB, 20, 2},
    {0x00CC, 22, 2},
    {0x00CD, 24, 2},
    {0x00CE, 26, 2},
    {0x00CF, 28, 2},
    {0x00D1, 30, 2},
    {0x00D2, 32, 2},
    {0x00D3, 34, 2},
    {0x00D4, 36, 2},
    {0x00D5, 38, 2},
    {0x00D6, 40, 2},
    {0x00D9, 42, 2},
    {0x00DA, 44, 2},
    {0x00DB, 46, 2},
    {0x00DC, 48, 2},
    {0x00DD, 50, 2},
    {0x00E0, 52, 2},
    {0x00E1, 54, 2},
    {0x00E2, 56, 2},
    {0x00E3, 58, 2},
    {0x00E4, 60, 2},
    {0x00E5, 62, 2},
    {0x00E7, 64, 2},
    {0x00E8, 66, 2},
    {0x00E9, 68, 2},
    {0x00EA, 70, 2},
    {0x00EB, 72, 2},
    {0x00EC, 74, 2},
    {0x00ED, 76, 2},
    {0x00EE, 78, 2},
    {0x00EF, 80, 2},
    {0x00F1, 82, 2},
    {0x00F2, 84, 2},
    {0x00F3, 86, 2},
    {0x00F4, 88, 2},
    {0x00F5, 90, 2},
    {0x00F6, 92, 2},
    {0x00F9, 94, 2},
    {0x00FA, 96, 2},
    {0x00FB, 98, 2},
    {0x00FC, 100, 2},
    {0x00FD, 102, 2},
    {0x00FF, 104, 2},
    {0x0100, 106, 2},
    {0x0101, 108, 2},
    {0x0102, 110, 2},
    {0x0103, 112, 2},
    {0x0104, 114, 2},
    {0x0105, 116, 2},
    {0x0106, 118, 2},
    {0x0107, 120, 2},
    {0x0108, 122, 2},
    {0x0109, 124, 2},
    {0x010A, 126, 2},
    {0x010B, 128, 2},
    {0x010C, 130, 2},
    {0x010D, 132, 2},
    {0x010E, 134, 2},
    {0x010F, 136, 2},
    {0x0112, 138, 2},
    {0x0113, 140, 2},
    {0x0114, 142, 2},
    {0x0115, 144, 2},
    {0x0116, 146, 2},
    {0x0117, 148, 2},
    {0x0118, 150, 2},
    {0x0119, 152, 2},
    {0x011A, 154, 2},
    {0x011B, 156, 2},
    {0x011C, 158, 2},
    {0x011D, 160, 2},
    {0x011E, 162, 2},
    {0x011F, 164, 2},
    {0x0120, 166, 2},
    {0x0121, 168, 2},
    {0x0122, 170, 2},
    {0x0123, 172, 2},
    {0x0124, 174, 2},
    {0x0125, 176, 2},
    {0x0128, 178, 2},
    {0x0129, 180, 2},
    {0x012A, 182, 2},
    {0x012B, 184, 2},
    {0x012C, 186, 2},
    {0x012D, 188, 2},
    {0x012E, 190, 2},
    {0x012F, 192, 2},
    {0x0130, 194, 2},
    {0x0134, 196, 2},
    {0x0135, 198, 2},
    {0x0136, 200, 2},
    {0x0137, 202, 2},
    {0x0139, 204, 2},
    {0x013A, 206, 2},
    {0x013B, 208, 2},
    {0x013C, 210, 2},
    {0x013D, 212, 2},
    {0x013E, 214, 2},
    {0x0143, 216, 2},
    {0x0144, 218, 2},
    {0x0145, 220, 2},
    {0x0146, 222, 2},
    {0x0147, 224, 2},
    {0x0148, 226, 2},
    {0x014C, 228, 2},
    {0x014D, 230, 2},
    {0x014E, 232, 2},
    {0x014F, 234, 2},
    {0x0150, 236, 2},
    {0x0151, 238, 2},
    {0x0154, 240, 2},
    {0x0155, 242, 2},
    {0x0156, 244, 2},
    {0x0157, 246, 2},
    {0x0158, 248, 2},
    {0x0159, 250, 2},
    {0x015A, 252, 2},
    {0x015B, 254, 2},
    {0x015C, 256, 2},
    {0x015D, 258, 2},
    {0x015E, 260, 2},
    {0x015F, 262, 2},
    {0x0160, 264, 2},
    {0x0161, 266, 2},
    {0x0162, 268, 2},
    {0x0163, 270, 2},
    {0x0164, 272, 2},
    {0x0165, 274, 2},
    {0x0168, 276, 2},
    {0x0169, 278, 2},
    {0x016A, 280, 2},
    {0x016B, 282, 2},
    {0x016C, 284, 2},
    {0x016D, 286, 2},
    {0x016E, 288, 2},
    {0x016F, 290, 2},
    {0x0170, 292, 2},
    {0x0171, 294, 2},
    {0x0172, 296, 2},
    {0x0173, 298, 2},
    {0x0174, 300, 2},
    {0x0175, 302, 2},
    {0x0176, 304, 2},
    {0x0177, 306, 2},
    {0x0178, 308, 2},
    {0x0179, 310, 2},
    {0x017A, 312, 2},
    {0x017B, 314, 2},
    {0x017C, 316, 2},
    {0x017D, 318, 2},
    {0x017E, 320, 2},
    {0x01A0, 322, 2},
    {0x01A1, 324, 2},
    {0x01AF, 326, 2},
    {0x01B0, 328, 2},
    {0x01CD, 330, 2},
    {0x01CE, 332, 2},
    {0x01CF, 334, 2},
    {0x01D0, 336, 2},
    {0x01D1, 338, 2},
    {0x01D2, 340, 2},
    {0x01D3, 342, 2},
    {0x01D4, 344, 2},
    {0x01D5, 346, 3},
    {0x01D6, 349, 3},
    {0x01D7, 352, 3},
    {0x01D8, 355, 3},
    {0x01D9, 358, 3},
    {0x01DA, 361, 3},
    {0x01DB, 364, 3},
    {0x01DC, 367, 3},
    {0x01DE, 370, 3},
    {0x01DF, 373, 3},
    {0x01E0, 376, 3},
    {0x01E1, 379, 3},
    {0x01E2, 382, 2},
    {0x01E3, 384, 2},
    {0x01E6, 386, 2},
    {0x01E7, 388, 2},
    {0x01E8, 390, 2},
    {0x01E9, 392, 2},
    {0x01EA, 394, 2},
    {0x01EB, 396, 2},
    {0x01EC, 398, 3},
    {0x01ED, 401, 3},
    {0x01EE, 404, 2},
    {0x01EF, 406, 2},
    {0x01F0, 408, 2},
    {0x01F4, 410, 2},
    {0x01F5, 412, 2},
    {0x01F8, 414, 2},
    {0x01F9, 416, 2},
    {0x01FA, 418, 3},
    {0x01FB, 421, 3},
    {0x01FC, 424, 2},
    {0x01FD, 426, 2},
    {0x01FE, 428, 2},
    {0x01FF, 430, 2},
    {0x0200, 432, 2},
    {0x0201, 434, 2},
    {0x0202, 436, 2},
    {0x0203, 438, 2},
    {0x0204, 440, 2},
    {0x0205, 442, 2},
    {0x0206, 444, 2},
    {0x0207, 446, 2},
    {0x0208, 448, 2},
    {0x0209, 450, 2},
    {0x020A, 452, 2},
    {0x020B, 454, 2},
    {0x020C, 456, 2},
    {0x020D, 458, 2},
    {0x020E, 460, 2},
    {0x020F, 462, 2},
    {0x0210, 464, 2},
    {0x0211, 466, 2},
    {0x0212, 468, 2},
    {0x0213, 470, 2},
    {0x0214, 472, 2},
    {0x0215, 474, 2},
    {0x0216, 476, 2},
    {0x0217, 478, 2},
    {0x0218, 480, 2},
    {0x0219, 482, 2},
    {0x021A, 484, 2},
    {0x021B, 486, 2},
    {0x021E, 488, 2},
    {0x021F, 490, 2},
    {0x0226, 492, 2},
    {0x0227, 494, 2},
    {0x0228, 496, 2},
    {0x0229, 498, 2},
    {0x022A, 500, 3},
    {0x022B, 503, 3},
    {0x022C, 506, 3},
    {0x022D, 509, 3},
    {0x022E, 512, 2},
    {0x022F, 514, 2},
    {0x0230, 516, 3},
    {0x0231, 519, 3},
    {0x0232, 522, 2},
    {0x0233, 524, 2},
    {0x0340, 526, 1},
    {0x0341, 527, 1},
    {0x0343, 528, 1},
    {0x0344, 529, 2},
    {0x0374, 531, 1},
    {0x037E, 532, 1},
    {0x0385, 533, 2},
    {0x0386, 535, 2},
    {0x0387, 537, 1},
    {0x0388, 538, 2},
    {0x0389, 540, 2},
    {0x038A, 542, 2},
    {0x038C, 544, 2},
    {0x038E, 546, 2},
    {0x038F, 548, 2},
    {0x0390, 550, 3},
    {0x03AA, 553, 2},
    {0x03AB, 555, 2},
    {0x03AC, 557, 2},
    {0x03AD, 559, 2},
    {0x03AE, 561, 2},
    {0x03AF, 563, 2},
    {0x03B0, 565, 3},
    {0x03CA, 568, 2},
    {0x03CB, 570, 2},
    {0x03CC, 572, 2},
    {0x03CD, 574, 2},
    {0x03CE, 576, 2},
    {0x03D3, 578, 2},
    {0x03D4, 580, 2},
    {0x0400, 582, 2},
    {0x0401, 584, 2},
    {0x0403, 586, 2},
    {0x0407, 588, 2},
    {0x040C, 590, 2},
    {0x040D, 592, 2},
    {0x040E, 594, 2},
    {0x0419, 596, 2},
    {0x0439, 598, 2},
    {0x0450, 600, 2},
    {0x0451, 602, 2},
    {0x0453, 604, 2},
    {0x0457, 606, 2},
    {0x045C, 608, 2},
    {0x045D, 610, 2},
    {0x045E, 612, 2},
    {0x0476, 614, 2},
    {0x0477, 616, 2},
    {0x04C1, 618, 2},
    {0x04C2, 620, 2},
    {0x04D0, 622, 2},
    {0x04D1, 624, 2},
    {0x04D2, 626, 2},
    {0x04D3, 628, 2},
    {0x04D6, 630, 2},
    {0x04D7, 632, 2},
    {0x04DA, 634, 2},
    {0x04DB, 636, 2},
    {0x04DC, 638, 2},
    {0x04DD, 640, 2},
    {0x04DE, 642, 2},
    {0x04DF, 644, 2},
    {0x04E2, 646, 2},
    {0x04E3, 648, 2},
    {0x04E4, 650, 2},
    {0x04E5, 652, 2},
    {0x04E6, 654, 2},
    {0x04E7, 656, 2},
    {0x04EA, 658, 2},
    {0x04EB, 660, 2},
    {0x04EC, 662, 2},
    {0x04ED, 664, 2},
    {0x04EE, 666, 2},
    {0x04EF, 668, 2},
    {0x04F0, 670, 2},
    {0x04F1, 672, 2},
    {0x04F2, 674, 2},
    {0x04F3, 676, 2},
    {0x04F4, 678, 2},
    {0x04F5, 680, 2},
    {0x04F8, 682, 2},
    {0x04F9, 684, 2},
    {0x0622, 686, 2},
    {0x0623, 688, 2},
    {0x0624, 690, 2},
    {0x0625, 692, 2},
    {0x0626, 694, 2},
    {0x06C0, 696, 2},
    {0x06C2, 698, 2},
    {0x06D3, 700, 2},
    {0x0929, 702, 2},
    {0x0931, 704, 2},
    {0x0934, 706, 2},
    {0x0958, 708, 2},
    {0x0959, 710, 2},
    {0x095A, 712, 2},
    {0x095B, 714, 2},
    {0x095C, 716, 2},
    {0x095D, 718, 2},
    {0x095E, 720, 2},
    {0x095F, 722, 2},
    {0x09CB, 724, 2},
    {0x09CC, 726, 2},
    {0x09DC, 728, 2},
    {0x09DD, 730, 2},
    {0x09DF, 732, 2},
    {0x0A33, 734, 2},
    {0x0A36, 736, 2},
    {0x0A59, 738, 2},
    {0x0A5A, 740, 2},
    {0x0A5B, 742, 2},
    {0x0A5E, 744, 2},
    {0x0B48, 746, 2},
    {0x0B4B, 748, 2},
    {0x0B4C, 750, 2},
    {0x0B5C, 752, 2},
    {0x0B5D, 754, 2},
    {0x0B94, 756, 2},
    {0x0BCA, 758, 2},
    {0x0BCB, 760, 2},
    {0x0BCC, 762, 2},
    {0x0C48, 764, 2},
    {0x0CC0, 766, 2},
    {0x0CC7, 768, 2},
    {0x0CC8, 770, 2},
    {0x0CCA, 772, 2},
    {0x0CCB, 774, 3},
    {0x0D4A, 777, 2},
    {0x0D4B, 779, 2},
    {0x0D4C, 781, 2},
    {0x0DDA, 783, 2},
    {0x0DDC, 785, 2},
    {0x0DDD, 787, 3},
    {0x0DDE, 790, 2},
    {0x0F43, 792, 2},
    {0x0F4D, 794, 2},
    {0x0F52, 796, 2},
    {0x0F57, 798, 2},
    {0x0F5C, 800, 2},
    {0x0F69, 802, 2},
    {0x0F73, 804, 2},
    {0x0F75, 806, 2},
    {0x0F76, 808, 2},
    {0x0F78, 810, 2},
    {0x0F81, 812, 2},
    {0x0F93, 814, 2},
    {0x0F9D, 816, 2},
    {0x0FA2, 818, 2},
    {0x0FA7, 820, 2},
    {0x0FAC, 822, 2},
    {0x0FB9, 824, 2},
};

inline constexpr uint32_t kDecompPool[] = {
    0x0041, 0x0300, 0x0041, 0x0301, 0x0041, 0x0302, 0x0041, 0x0303,
    0x0041, 0x0308, 0x0041, 0x030A, 0x0043, 0x0327, 0x0045, 0x0300,
    0x0045, 0x0301, 0x0045, 0x0302, 0x0045, 0x0308, 0x0049, 0x0300,
    0x0049, 0x0301, 0x0049, 0x0302, 0x0049, 0x0308, 0x004E, 0x0303,
    0x004F, 0x0300, 0x004F, 0x0301, 0x004F, 0x0302, 0x004F, 0x0303,
    0x004F, 0x0308, 0x0055, 0x0300, 0x0055, 0x0301, 0x0055, 0x0302,
    0x0055, 0x0308, 0x0059, 0x0301, 0x0061, 0x0300, 0x0061, 0x0301,
    0x0061, 0x0302, 0x0061, 0x0303, 0x0061, 0x0308, 0x0061, 0x030A,
    0x0063, 0x0327, 0x0065, 0x0300, 0x0065, 0x0301, 0x0065, 0x0302,
    0x0065, 0x0308, 0x0069, 0x0300, 0x0069, 0x0301, 0x0069, 0x0302,
    0x0069, 0x0308, 0x006E, 0x0303, 0x006F, 0x0300, 0x006F, 0x0301,
    0x006F, 0x0302, 0x006F, 0x0303, 0x006F, 0x0308, 0x0075, 0x0300,
    0x0075, 0x0301, 0x0075, 0x0302, 0x0075, 0x0308, 0x0079, 0x0301,
    0x0079, 0x0308, 0x0041, 0x0304, 0x0061, 0x0304, 0x0041, 0x0306,
    0x0061, 0x0306, 0x0041, 0x0328, 0x0061, 0x0328, 0x0043, 0x0301,
    0x0063, 0x0301, 0x0043, 0x0302, 0x0063, 0x0302, 0x0043, 0x0307,
    0x0063, 0x0307, 0x0043, 0x030C, 0x0063, 0x030C, 0x0044, 0x030C,
    0x0064, 0x030C, 0x0045, 0x0304, 0x0065, 0x0304, 0x0045, 0x0306,
    0x0065, 0x0306, 0x0045, 0x0307, 0x0065, 0x0307, 0x0045, 0x0328,
    0x0065, 0x0328, 0x0045, 0x030C, 0x0065, 0x030C, 0x0047, 0x0302,
    0x0067, 0x0302, 0x0047, 0x0306, 0x0067, 0x0306, 0x0047, 0x0307,
    0x0067, 0x0307, 0x0047, 0x0327, 0x0067, 0x0327, 0x0048, 0x0302,
    0x0068, 0x0302, 0x0049, 0x0303, 0x0069, 0x0303, 0x0049, 0x0304,
    0x0069, 0x0304, 0x0049, 0x0306, 0x0069, 0x0306, 0x0049, 0x0328,
    0x0069, 0x0328, 0x0049, 0x0307, 0x004A, 0x0302, 0x006A, 0x0302,
    0x004B, 0x0327, 0x006B, 0x0327, 0x004C, 0x0301, 0x006C, 0x0301,
    0x004C, 0x0327, 0x006C, 0x0327, 0x004C, 0x030C, 0x006C, 0x030C,
    0x004E, 0x0301, 0x006E, 0x0301, 0x004E, 0x0327, 0x006E, 0x0327,
    0x004E, 0x030C, 0x006E, 0x030C, 0x004F, 0x0304, 0x006F, 0x0304,
    0x004F, 0x0306, 0x006F, 0x0306, 0x004F, 0x030B, 0x006F, 0x030B,
    0x0052, 0x0301, 0x0072, 0x0301, 0x0052, 0x0327, 0x0072, 0x0327,
    0x0052, 0x030C, 0x0072, 0x030C, 0x0053, 0x0301, 0x0073, 0x0301,
    0x0053, 0x0302, 0x0073, 0x0302, 0x0053, 0x0327, 0x0073, 0x0327,
    0x0053, 0x030C, 0x0073, 0x030C, 0x0054, 0x0327, 0x0074, 0x0327,
    0x0054, 0x030C, 0x0074, 0x030C, 0x0055, 0x0303, 0x0075, 0x0303,
    0x0055, 0x0304, 0x0075, 0x0304, 0x0055, 0x0306, 0x0075, 0x0306,
    0x0055, 0x030A, 0x0075, 0x030A, 0x0055, 0x030B, 0x0075, 0x030B,
    0x0055, 0x0328, 0x0075, 0x0328, 0x0057, 0x0302, 0x0077, 0x0302,
    0x0059, 0x0302, 0x0079, 0x0302, 0x0059, 0x0308, 0x005A, 0x0301,
    0x007A, 0x0301, 0x005A, 0x0307, 0x007A, 0x0307, 0x005A, 0x030C,
    0x007A, 0x030C, 0x004F, 0x031B, 0x006F, 0x031B, 0x0055, 0x031B,
    0x0075, 0x031B, 0x0041, 0x030C, 0x0061, 0x030C, 0x0049, 0x030C,
    0x0069, 0x030C, 0x004F, 0x030C, 0x006F, 0x030C, 0x0055, 0x030C,
    0x0075, 0x030C, 0x0055, 0x0308, 0x0304, 0x0075, 0x0308, 0x0304,
    0x0055, 0x0308, 0x0301, 0x0075, 0x0308, 0x0301, 0x0055, 0x0308,
    0x030C, 0x0075, 0x0308, 0x030C, 0x0055, 0x0308, 0x0300, 0x0075,
    0x0308, 0x0300, 0x0041, 0x0308, 0x0304, 0x0061, 0x0308, 0x0304,
    0x0041, 0x0307, 0x0304, 0x0061, 0x0307, 0x0304, 0x00C6, 0x0304,
    0x00E6, 0x0304, 0x0047, 0x030C, 0x0067, 0x030C, 0x004B, 0x030C,
    0x006B, 0x030C, 0x004F, 0x0328, 0x006F, 0x0328, 0x004F, 0x0328,
    0x0304, 0x006F, 0x0328, 0x0304, 0x01B7, 0x030C, 0x0292, 0x030C,
    0x006A, 0x030C, 0x0047, 0x0301, 0x0067, 0x0301, 0x004E, 0x0300,
    0x006E, 0x0300, 0x0041, 0x030A, 0x0301, 0x0061, 0x030A, 0x0301,
    0x00C6, 0x0301, 0x00E6, 0x0301, 0x00D8, 0x0301, 0x00F8, 0x0301,
    0x0041, 0x030F, 0x0061, 0x030F, 0x0041, 0x0311, 0x0061, 0x0311,
    0x0045, 0x030F, 0x0065, 0x030F, 0x0045, 0x0311, 0x0065, 0x0311,
    0x0049, 0x030F, 0x0069, 0x030F, 0x0049, 0x0311, 0x0069, 0x0311,
    0x004F, 0x030F, 0x006F, 0x030F, 0x004F, 0x0311, 0x006F, 0x0311,
    0x0052, 0x030F, 0x0072, 0x030F, 0x0052, 0x0311, 0x0072, 0x0311,
    0x0055, 0x030F, 0x0075, 0x030F, 0x0055, 0x0311, 0x0075, 0x0311,
    0x0053, 0x0326, 0x0073, 0x0326, 0x0054, 0x0326, 0x0074, 0x0326,
    0x0048, 0x030C, 0x0068, 0x030C, 0x0041, 0x0307, 0x0061, 0x0307,
    0x0045, 0x0327, 0x0065, 0x0327, 0x004F, 0x0308, 0x0304, 0x006F,
    0x0308, 0x0304, 0x004F, 0x0303, 0x0304, 0x006F, 0x0303, 0x0304,
    0x004F, 0x0307, 0x006F, 0x0307, 0x004F, 0x0307, 0x0304, 0x006F,
    0x0307, 0x0304, 0x0059, 0x0304, 0x0079, 0x0304, 0x0300, 0x0301,
    0x0313, 0x0308, 0x0301, 0x02B9, 0x003B, 0x00A8, 0x0301, 0x0391,
    0x0301, 0x00B7, 0x0395, 0x0301, 0x0397, 0x0301, 0x0399, 0x0301,
    0x039F, 0x0301, 0x03A5, 0x0301, 0x03A9, 0x0301, 0x03B9, 0x0308,
    0x0301, 0x0399, 0x0308, 0x03A5, 0x0308, 0x03B1, 0x0301, 0x03B5,
    0x0301, 0x03B7, 0x0301, 0x03B9, 0x0301, 0x03C5, 0x0308, 0x0301,
    0x03B9, 0x0308, 0x03C5, 0x0308, 0x03BF, 0x0301, 0x03C5, 0x0301,
    0x03C9, 0x0301, 0x03D2, 0x0301, 0x03D2, 0x0308, 0x0415, 0x0300,
    0x0415, 0x0308, 0x0413, 0x0301, 0x0406, 0x0308, 0x041A, 0x0301,
    0x0418, 0x0300, 0x0423, 0x0306, 0x0418, 0x0306, 0x0438, 0x0306,
    0x0435, 0x0300, 0x0435, 0x0308, 0x0433, 0x0301, 0x0456, 0x0308,
    0x043A, 0x0301, 0x0438, 0x0300, 0x0443, 0x0306, 0x0474, 0x030F,
    0x0475, 0x030F, 0x0416, 0x0306, 0x0436, 0x0306, 0x0410, 0x0306,
    0x0430, 0x0306, 0x0410, 0x0308, 0x0430, 0x0308, 0x0415, 0x0306,
    0x0435, 0x0306, 0x04D8, 0x0308, 0x04D9, 0x0308, 0x0416, 0x0308,
    0x0436, 0x0308, 0x0417, 0x0308, 0x0437, 0x0308, 0x0418, 0x0304,
    0x0438, 0x0304, 0x0418, 0x0308, 0x0438, 0x0308, 0x041E, 0x0308,
    0x043E, 0x0308, 0x04E8, 0x0308, 0x04E9, 0x0308, 0x042D, 0x0308,
    0x044D, 0x0308, 0x0423, 0x0304, 0x0443, 0x0304, 0x0423, 0x0308,
    0x0443, 0x0308, 0x0423, 0x030B, 0x0443, 0x030B, 0x0427, 0x0308,
    0x0447, 0x0308, 0x042B, 0x0308, 0x044B, 0x0308, 0x0627, 0x0653,
    0x0627, 0x0654, 0x0648, 0x0654, 0x0627, 0x0655, 0x064A, 0x0654,
    0x06D5, 0x0654, 0x06C1, 0x0654, 0x06D2, 0x0654, 0x0928, 0x093C,
    0x0930, 0x093C, 0x0933, 0x093C, 0x0915, 0x093C, 0x0916, 0x093C,
    0x0917, 0x093C, 0x091C, 0x093C, 0x0921, 0x093C, 0x0922, 0x093C,
    0x092B, 0x093C, 0x092F, 0x093C, 0x09C7, 0x09BE, 0x09C7, 0x09D7,
    0x09A1, 0x09BC, 0x09A2, 0x09BC, 0x09AF, 0x09BC, 0x0A32, 0x0A3C,
    0x0A38, 0x0A3C, 0x0A16, 0x0A3C, 0x0A17, 0x0A3C, 0x0A1C, 0x0A3C,
    0x0A2B, 0x0A3C, 0x0B47, 0x0B56, 0x0B47, 0x0B3E, 0x0B47, 0x0B57,
    0x0B21, 0x0B3C, 0x0B22, 0x0B3C, 0x0B92, 0x0BD7, 0x0BC6, 0x0BBE,
    0x0BC7, 0x0BBE, 0x0BC6, 0x0BD7, 0x0C46, 0x0C56, 0x0CBF, 0x0CD5,
    0x0CC6, 0x0CD5, 0x0CC6, 0x0CD6, 0x0CC6, 0x0CC2, 0x0CC6, 0x0CC2,
    0x0CD5, 0x0D46, 0x0D3E, 0x0D47, 0x0D3E, 0x0D46, 0x0D57, 0x0DD9,
    0x0DCA, 0x0DD9, 0x0DCF, 0x0DD9, 0x0DCF, 0x0DCA, 0x0DD9, 0x0DDF,
    0x0F42, 0x0FB7, 0x0F4C, 0x0FB7, 0x0F51, 0x0FB7, 0x0F56, 0x0FB7,
    0x0F5B, 0x0FB7, 0x0F40, 0x0FB5, 0x0F71, 0x0F72, 0x0F71, 0x0F74,
    0x0FB2, 0x0F80, 0x0FB3, 0x0F80, 0x0F71, 0x0F80, 0x0F92, 0x0FB7,
    0x0F9C, 0x0FB7, 0x0FA1, 0x0FB7, 0x0FA6, 0x0FB7, 0x0FAB, 0x0FB7,
    0x0F90, 0x0FB5,
};

struct CccEntry { uint32_t cp; uint8_t ccc; };
inline constexpr CccEntry kCcc[] = {
    {0x0300, 230},
    {0x0301, 230},
    {0x0302, 230},
    {0x0303, 230},
    {0x0304, 230},
    {0x0305, 230},
    {0x0306, 230},
    {0x0307, 230},
    {0x0308, 230},
    {0x0309, 230},
    {0x030A, 230},
    {0x030B, 230},
    {0x030C, 230},
    {0x030D, 230},
    {0x030E, 230},
    {0x030F, 230},
    {0x0310, 230},
    {0x0311, 230},
    {0x0312, 230},
    {0x0313, 230},
    {0x0314, 230},
    {0x0315, 232},
    {0x0316, 220},
    {0x0317, 220},
    {0x0318, 220},
    {0x0319, 220},
    {0x031A, 232},
    {0x031B, 216},
    {0x031C, 220},
    {0x031D, 220},
    {0x031E, 220},
    {0x031F, 220},
    {0x0320, 220},
    {0x0321, 202},
    {0x0322, 202},
    {0x0323, 220},
    {0x0324, 220},
    {0x0325, 220},
    {0x0326, 220},
    {0x0327, 202},
    {0x0328, 202},
    {0x0329, 220},
    {0x032A, 220},
    {0x032B, 220},
    {0x032C, 220},
    {0x032D, 220},
    {0x032E, 220},
    {0x032F, 220},
    {0x0330, 220},
    {0x0331, 220},
    {0x0332, 220},
    {0x0333, 220},
    {0x0334, 1},
    {0x0335, 1},
    {0x0336, 1},
    {0x0337, 1},
    {0x0338, 1},
    {0x0339, 220},
    {0x033A, 220},
    {0x033B, 220},
    {0x033C, 220},
    {0x033D, 230},
    {0x033E, 230},
    {0x033F, 230},
    {0x0340, 230},
    {0x0341, 230},
    {0x0342, 230},
    {0x0343, 230},
    {0x0344, 230},
    {0x0345, 240},
    {0x0346, 230},
    {0x0347, 220},
    {0x0348, 220},
    {0x0349, 220},
    {0x034A, 230},
    {0x034B, 230},
    {0x034C, 230},
    {0x034D, 220},
    {0x034E, 220},
    {0x0350, 230},
    {0x0351, 230},
    {0x0352, 230},
    {0x0353, 220},
    {0x0354, 220},
    {0x0355, 220},
    {0x0356, 220},
    {0x0357, 230},
    {0x0358, 232},
    {0x0359, 220},
    {0x035A, 220},
    {0x035B, 230},
    {0x035C, 233},
    {0x035D, 234},
    {0x035E, 234},
    {0x035F, 233},
    {0x0360, 234},
    {0x0361, 234},
    {0x0362, 233},
    {0x0363, 230},
    {0x0364, 230},
    {0x0365, 230},
    {0x0366, 230},
    {0x0367, 230},
    {0x0368, 230},
    {0x0369, 230},
    {0x036A, 230},
    {0x036B, 230},
    {0x036C, 230},
    {0x036D, 230},
    {0x036E, 230},
    {0x036F, 230},
    {0x0483, 230},
    {0x0484, 230},
    {0x0485, 230},
    {0x0486, 230},
    {0x0487, 230},
    {0x0591, 220},
    {0x0592, 230},
    {0x0593, 230},
    {0x0594, 230},
    {0x0595, 230},
    {0x0596, 220},
    {0x0597, 230},
    {0x0598, 230},
    {0x0599, 230},
    {0x059A, 222},
    {0x059B, 220},
    {0x059C, 230},
    {0x059D, 230},
    {0x059E, 230},
    {0x059F, 230},
    {0x05A0, 230},
    {0x05A1, 230},
    {0x05A2, 220},
    {0x05A3, 220},
    {0x05A4, 220},
    {0x05A5, 220},
    {0x05A6, 220},
    {0x05A7, 220},
    {0x05A8, 230},
    {0x05A9, 230},
    {0x05AA, 220},
    {0x05AB, 230},
    {0x05AC, 230},
    {0x05AD, 222},
    {0x05AE, 228},
    {0x05AF, 230},
    {0x05B0, 10},
    {0x05B1, 11},
    {0x05B2, 12},
    {0x05B3, 13},
    {0x05B4, 14},
    {0x05B5, 15},
    {0x05B6, 16},
    {0x05B7, 17},
    {0x05B8, 18},
    {0x05B9, 19},
    {0x05BA, 19},
    {0x05BB, 20},
    {0x05BC, 21},
    {0x05BD, 22},
    {0x05BF, 23},
    {0x05C1, 24},
    {0x05C2, 25},
    {0x05C4, 230},
    {0x05C5, 220},
    {0x05C7, 18},
    {0x0610, 230},
    {0x0611, 230},
    {0x0612, 230},
    {0x0613, 230},
    {0x0614, 230},
    {0x0615, 230},
    {0x0616, 230},
    {0x0617, 230},
    {0x0618, 30},
    {0x0619, 31},
    {0x061A, 32},
    {0x064B, 27},
    {0x064C, 28},
    {0x064D, 29},
    {0x064E, 30},
    {0x064F, 31},
    {0x0650, 32},
    {0x0651, 33},
    {0x0652, 34},
    {0x0653, 230},
    {0x0654, 230},
    {0x0655, 220},
    {0x0656, 220},
    {0x0657, 230},
    {0x0658, 230},
    {0x0659, 230},
    {0x065A, 230},
    {0x065B, 230},
    {0x065C, 220},
    {0x065D, 230},
    {0x065E, 230},
    {0x065F, 220},
    {0x0670, 35},
    {0x06D6, 230},
    {0x06D7, 230},
    {0x06D8, 230},
    {0x06D9, 230},
    {0x06DA, 230},
    {0x06DB, 230},
    {0x06DC, 230},
    {0x06DF, 230},
    {0x06E0, 230},
    {0x06E1, 230},
    {0x06E2, 230},
    {0x06E3, 220},
    {0x06E4, 230},
    {0x06E7, 230},
    {0x06E8, 230},
    {0x06EA, 220},
    {0x06EB, 230},
    {0x06EC, 230},
    {0x06ED, 220},
    {0x0711, 36},
    {0x0730, 230},
    {0x0731, 220},
    {0x0732, 230},
    {0x0733, 230},
    {0x0734, 220},
    {0x0735, 230},
    {0x0736, 230},
    {0x0737, 220},
    {0x0738, 220},
    {0x0739, 220},
    {0x073A, 230},
    {0x073B, 220},
    {0x073C, 220},
    {0x073D, 230},
    {0x073E, 220},
    {0x073F, 230},
    {0x0740, 230},
    {0x0741, 230},
    {0x0742, 220},
    {0x0743, 230},
    {0x0744, 220},
    {0x0745, 230},
    {0x0746, 220},
    {0x0747, 230},
    {0x0748, 220},
    {0x0749, 230},
    {0x074A, 230},
    {0x07EB, 230},
    {0x07EC, 230},
    {0x07ED, 230},
    {0x07EE, 230},
    {0x07EF, 230},
    {0x07F0, 230},
    {0x07F1, 230},
    {0x07F2, 220},
    {0x07F3, 230},
    {0x07FD, 220},
    {0x0816, 230},
    {0x0817, 230},
    {0x0818, 230},
    {0x0819, 230},
    {0x081B, 230},
    {0x081C, 230},
    {0x081D, 230},
    {0x081E, 230},
    {0x081F, 230},
    {0x0820, 230},
    {0x0821, 230},
    {0x0822, 230},
    {0x0823, 230},
    {0x0825, 230},
    {0x0826, 230},
    {0x0827, 230},
    {0x0829, 230},
    {0x082A, 230},
    {0x082B, 230},
    {0x082C, 230},
    {0x082D, 230},
    {0x0859, 220},
    {0x085A, 220},
    {0x085B, 220},
    {0x08D3, 220},
    {0x08D4, 230},
    {0x08D5, 230},
    {0x08D6, 230},
    {0x08D7, 230},
    {0x08D8, 230},
    {0x08D9, 230},
    {0x08DA, 230},
    {0x08DB, 230},
    {0x08DC, 230},
    {0x08DD, 230},
    {0x08DE, 230},
    {0x08DF, 230},
    {0x08E0, 230},
    {0x08E1, 230},
    {0x08E3, 220},
    {0x08E4, 230},
    {0x08E5, 230},
    {0x08E6, 220},
    {0x08E7, 230},
    {0x08E8, 230},
    {0x08E9, 220},
    {0x08EA, 230},
    {0x08EB, 230},
    {0x08EC, 230},
    {0x08ED, 220},
    {0x08EE, 220},
    {0x08EF, 220},
    {0x08F0, 27},
    {0x08F1, 28},
    {0x08F2, 29},
    {0x08F3, 230},
    {0x08F4, 230},
    {0x08F5, 230},
    {0x08F6, 220},
    {0x08F7, 230},
    {0x08F8, 230},
    {0x08F9, 220},
    {0x08FA, 220},
    {0x08FB, 230},
    {0x08FC, 230},
    {0x08FD, 230},
    {0x08FE, 230},
    {0x08FF, 230},
    {0x093C, 7},
    {0x094D, 9},
    {0x0951, 230},
    {0x0952, 220},
    {0x0953, 230},
    {0x0954, 230},
    {0x09BC, 7},
    {0x09CD, 9},
    {0x09FE, 230},
    {0x0A3C, 7},
    {0x0A4D, 9},
    {0x0ABC, 7},
    {0x0ACD, 9},
    {0x0B3C, 7},
    {0x0B4D, 9},
    {0x0BCD, 9},
    {0x0C4D, 9},
    {0x0C55, 84},
    {0x0C56, 91},
    {0x0CBC, 7},
    {0x0CCD, 9},
    {0x0D3B, 9},
    {0x0D3C, 9},
    {0x0D4D, 9},
    {0x0DCA, 9},
    {0x0E38, 103},
    {0x0E39, 103},
    {0x0E3A, 9},
    {0x0E48, 107},
    {0x0E49, 107},
    {0x0E4A, 107},
    {0x0E4B, 107},
    {0x0EB8, 118},
    {0x0EB9, 118},
    {0x0EBA, 9},
    {0x0EC8, 122},
    {0x0EC9, 122},
    {0x0ECA, 122},
    {0x0ECB, 122},
    {0x0F18, 220},
    {0x0F19, 220},
    {0x0F35, 220},
    {0x0F37, 220},
    {0x0F39, 216},
    {0x0F71, 129},
    {0x0F72, 130},
    {0x0F74, 132},
    {0x0F7A, 130},
    {0x0F7B, 130},
    {0x0F7C, 130},
    {0x0F7D, 130},
    {0x0F80, 130},
    {0x0F82, 230},
    {0x0F83, 230},
    {0x0F84, 9},
    {0x0F86, 230},
    {0x0F87, 230},
    {0x0FC6, 220},
};

struct CompEntry { uint32_t first; uint32_t second; uint32_t composed; };
inline constexpr CompEntry kComp[] = {
    {0x0041, 0x0300, 0x00C0},
    {0x0041, 0x0301, 0x00C1},
    {0x0041, 0x0302, 0x00C2},
    {0x0041, 0x0303, 0x00C3},
    {0x0041, 0x0304, 0x0100},
    {0x0041, 0x0306, 0x0102},
    {0x0041, 0x0307, 0x0226},
    {0x0041, 0x0308, 0x00C4},
    {0x0041, 0x030A, 0x00C5},
    {0x0041, 0x030C, 0x01CD},
    {0x0041, 0x030F, 0x0200},
    {0x0041, 0x0311, 0x0202},
    {0x0041, 0x0328, 0x0104},
    {0x0043, 0x0301, 0x0106},
    {0x0043, 0x0302, 0x0108},
    {0x0043, 0x0307, 0x010A},
    {0x0043, 0x030C, 0x010C},
    {0x0043, 0x0327, 0x00C7},
    {0x0044, 0x030C, 0x010E},
    {0x0045, 0x0300, 0x00C8},
    {0x0045, 0x0301, 0x00C9},
    {0x0045, 0x0302, 0x00CA},
    {0x0045, 0x0304, 0x0112},
    {0x0045, 0x0306, 0x0114},
    {0x0045, 0x0307, 0x0116},
    {0x0045, 0x0308, 0x00CB},
    {0x0045, 0x030C, 0x011A},
    {0x0045, 0x030F, 0x0204},
    {0x0045, 0x0311, 0x0206},
    {0x0045, 0x0327, 0x0228},
    {0x0045, 0x0328, 0x0118},
    {0x0047, 0x0301, 0x01F4},
    {0x0047, 0x0302, 0x011C},
    {0x0047, 0x0306, 0x011E},
    {0x0047, 0x0307, 0x0120},
    {0x0047, 0x030C, 0x01E6},
    {0x0047, 0x0327, 0x0122},
    {0x0048, 0x0302, 0x0124},
    {0x0048, 0x030C, 0x021E},
    {0x0049, 0x0300, 0x00CC},
    {0x0049, 0x0301, 0x00CD},
    {0x0049, 0x0302, 0x00CE},
    {0x0049, 0x0303, 0x0128},
    {0x0049, 0x0304, 0x012A},
    {0x0049, 0x0306, 0x012C},
    {0x0049, 0x0307, 0x0130},
    {0x0049, 0x0308, 0x00CF},
    {0x0049, 0x030C, 0x01CF},
    {0x0049, 0x030F, 0x0208},
    {0x0049, 0x0311, 0x020A},
    {0x0049, 0x0328, 0x012E},
    {0x004A, 0x0302, 0x0134},
    {0x004B, 0x030C, 0x01E8},
    {0x004B, 0x0327, 0x0136},
    {0x004C, 0x0301, 0x0139},
    {0x004C, 0x030C, 0x013D},
    {0x004C, 0x0327, 0x013B},
    {0x004E, 0x0300, 0x01F8},
    {0x004E, 0x0301, 0x0143},
    {0x004E, 0x0303, 0x00D1},
    {0x004E, 0x030C, 0x0147},
    {0x004E, 0x0327, 0x0145},
    {0x004F, 0x0300, 0x00D2},
    {0x004F, 0x0301, 0x00D3},
    {0x004F, 0x0302, 0x00D4},
    {0x004F, 0x0303, 0x00D5},
    {0x004F, 0x0304, 0x014C},
    {0x004F, 0x0306, 0x014E},
    {0x004F, 0x0307, 0x022E},
    {0x004F, 0x0308, 0x00D6},
    {0x004F, 0x030B, 0x0150},
    {0x004F, 0x030C, 0x01D1},
    {0x004F, 0x030F, 0x020C},
    {0x004F, 0x0311, 0x020E},
    {0x004F, 0x031B, 0x01A0},
    {0x004F, 0x0328, 0x01EA},
    {0x0052, 0x0301, 0x0154},
    {0x0052, 0x030C, 0x0158},
    {0x0052, 0x030F, 0x0210},
    {0x0052, 0x0311, 0x0212},
    {0x0052, 0x0327, 0x0156},
    {0x0053, 0x0301, 0x015A},
    {0x0053, 0x0302, 0x015C},
    {0x0053, 0x030C, 0x0160},
    {0x0053, 0x0326, 0x0218},
    {0x0053, 0x0327, 0x015E},
    {0x0054, 0x030C, 0x0164},
    {0x0054, 0x0326, 0x021A},
    {0x0054, 0x0327, 0x0162},
    {0x0055, 0x0300, 0x00D9},
    {0x0055, 0x0301, 0x00DA},
    {0x0055, 0x0302, 0x00DB},
    {0x0055, 0x0303, 0x0168},
    {0x0055, 0x0304, 0x016A},
    {0x0055, 0x0306, 0x016C},
    {0x0055, 0x0308, 0x00DC},
    {0x0055, 0x030A, 0x016E},
    {0x0055, 0x030B, 0x0170},
    {0x0055, 0x030C, 0x01D3},
    {0x0055, 0x030F, 0x0214},
    {0x0055, 0x0311, 0x0216},
    {0x0055, 0x031B, 0x01AF},
    {0x0055, 0x0328, 0x0172},
    {0x0057, 0x0302, 0x0174},
    {0x0059, 0x0301, 0x00DD},
    {0x0059, 0x0302, 0x0176},
    {0x0059, 0x0304, 0x0232},
    {0x0059, 0x0308, 0x0178},
    {0x005A, 0x0301, 0x0179},
    {0x005A, 0x0307, 0x017B},
    {0x005A, 0x030C, 0x017D},
    {0x0061, 0x0300, 0x00E0},
    {0x0061, 0x0301, 0x00E1},
    {0x0061, 0x0302, 0x00E2},
    {0x0061, 0x0303, 0x00E3},
    {0x0061, 0x0304, 0x0101},
    {0x0061, 0x0306, 0x0103},
    {0x0061, 0x0307, 0x0227},
    {0x0061, 0x0308, 0x00E4},
    {0x0061, 0x030A, 0x00E5},
    {0x0061, 0x030C, 0x01CE},
    {0x0061, 0x030F, 0x0201},
    {0x0061, 0x0311, 0x0203},
    {0x0061, 0x0328, 0x0105},
    {0x0063, 0x0301, 0x0107},
    {0x0063, 0x0302, 0x0109},
    {0x0063, 0x0307, 0x010B},
    {0x0063, 0x030C, 0x010D},
    {0x0063, 0x0327, 0x00E7},
    {0x0064, 0x030C, 0x010F},
    {0x0065, 0x0300, 0x00E8},
    {0x0065, 0x0301, 0x00E9},
    {0x0065, 0x0302, 0x00EA},
    {0x0065, 0x0304, 0x0113},
    {0x0065, 0x0306, 0x0115},
    {0x0065, 0x0307, 0x0117},
    {0x0065, 0x0308, 0x00EB},
    {0x0065, 0x030C, 0x011B},
    {0x0065, 0x030F, 0x0205},
    {0x0065, 0x0311, 0x0207},
    {0x0065, 0x0327, 0x0229},
    {0x0065, 0x0328, 0x0119},
    {0x0067, 0x0301, 0x01F5},
    {0x0067, 0x0302, 0x011D},
    {0x0067, 0x0306, 0x011F},
    {0x0067, 0x0307, 0x0121},
    {0x0067, 0x030C, 0x01E7},
    {0x0067, 0x0327, 0x0123},
    {0x0068, 0x0302, 0x0125},
    {0x0068, 0x030C, 0x021F},
    {0x0069, 0x0300, 0x00EC},
    {0x0069, 0x0301, 0x00ED},
    {0x0069, 0x0302, 0x00EE},
    {0x0069, 0x0303, 0x0129},
    {0x0069, 0x0304, 0x012B},
    {0x0069, 0x0306, 0x012D},
    {0x0069, 0x0308, 0x00EF},
    {0x0069, 0x030C, 0x01D0},
    {0x0069, 0x030F, 0x0209},
    {0x0069, 0x0311, 0x020B},
    {0x0069, 0x0328, 0x012F},
    {0x006A, 0x0302, 0x0135},
    {0x006A, 0x030C, 0x01F0},
    {0x006B, 0x030C, 0x01E9},
    {0x006B, 0x0327, 0x0137},
    {0x006C, 0x0301, 0x013A},
    {0x006C, 0x030C, 0x013E},
    {0x006C, 0x0327, 0x013C},
    {0x006E, 0x0300, 0x01F9},
    {0x006E, 0x0301, 0x0144},
    {0x006E, 0x0303, 0x00F1},
    {0x006E, 0x030C, 0x0148},
    {0x006E, 0x0327, 0x0146},
    {0x006F, 0x0300, 0x00F2},
    {0x006F, 0x0301, 0x00F3},
    {0x006F, 0x0302, 0x00F4},
    {0x006F, 0x0303, 0x00F5},
    {0x006F, 0x0304, 0x014D},
    {0x006F, 0x0306, 0x014F},
    {0x006F, 0x0307, 0x022F},
    {0x006F, 0x0308, 0x00F6},
    {0x006F, 0x030B, 0x0151},
    {0x006F, 0x030C, 0x01D2},
    {0x006F, 0x030F, 0x020D},
    {0x006F, 0x0311, 0x020F},
    {0x006F, 0x031B, 0x01A1},
    {0x006F, 0x0328, 0x01EB},
    {0x0072, 0x0301, 0x0155},
    {0x0072, 0x030C, 0x0159},
    {0x0072, 0x030F, 0x0211},
    {0x0072, 0x0311, 0x0213},
    {0x0072, 0x0327, 0x0157},
    {0x0073, 0x0301, 0x015B},
    {0x0073, 0x0302, 0x015D},
    {0x0073, 0x030C, 0x0161},
    {0x0073, 0x0326, 0x0219},
    {0x0073, 0x0327, 0x015F},
    {0x0074, 0x030C, 0x0165},
    {0x0074, 0x0326, 0x021B},
    {0x0074, 0x0327, 0x0163},
    {0x0075, 0x0300, 0x00F9},
    {0x0075, 0x0301, 0x00FA},
    {0x0075, 0x0302, 0x00FB},
    {0x0075, 0x0303, 0x0169},
    {0x0075, 0x0304, 0x016B},
    {0x0075, 0x0306, 0x016D},
    {0x0075, 0x0308, 0x00FC},
    {0x0075, 0x030A, 0x016F},
    {0x0075, 0x030B, 0x0171},
    {0x0075, 0x030C, 0x01D4},
    {0x0075, 0x030F, 0x0215},
    {0x0075, 0x0311, 0x0217},
    {0x0075, 0x031B, 0x01B0},
    {0x0075, 0x0328, 0x0173},
    {0x0077, 0x0302, 0x0175},
    {0x0079, 0x0301, 0x00FD},
    {0x0079, 0x0302, 0x0177},
    {0x0079, 0x0304, 0x0233},
    {0x0079, 0x0308, 0x00FF},
    {0x007A, 0x0301, 0x017A},
    {0x007A, 0x0307, 0x017C},
    {0x007A, 0x030C, 0x017E},
    {0x00A8, 0x0301, 0x0385},
    {0x00C4, 0x0304, 0x01DE},
    {0x00C5, 0x0301, 0x01FA},
    {0x00C6, 0x0301, 0x01FC},
    {0x00C6, 0x0304, 0x01E2},
    {0x00D5, 0x0304, 0x022C},
    {0x00D6, 0x0304, 0x022A},
    {0x00D8, 0x0301, 0x01FE},
    {0x00DC, 0x0300, 0x01DB},
    {0x00DC, 0x0301, 0x01D7},
    {0x00DC, 0x0304, 0x01D5},
    {0x00DC, 0x030C, 0x01D9},
    {0x00E4, 0x0304, 0x01DF},
    {0x00E5, 0x0301, 0x01FB},
    {0x00E6, 0x0301, 0x01FD},
    {0x00E6, 0x0304, 0x01E3},
    {0x00F5, 0x0304, 0x022D},
    {0x00F6, 0x0304, 0x022B},
    {0x00F8, 0x0301, 0x01FF},
    {0x00FC, 0x0300, 0x01DC},
    {0x00FC, 0x0301, 0x01D8},
    {0x00FC, 0x0304, 0x01D6},
    {0x00FC, 0x030C, 0x01DA},
    {0x01B7, 0x030C, 0x01EE},
    {0x01EA, 0x0304, 0x01EC},
    {0x01EB, 0x0304, 0x01ED},
    {0x0226, 0x0304, 0x01E0},
    {0x0227, 0x0304, 0x01E1},
    {0x022E, 0x0304, 0x0230},
    {0x022F, 0x0304, 0x0231},
    {0x0292, 0x030C, 0x01EF},
    {0x0391, 0x0301, 0x0386},
    {0x0395, 0x0301, 0x0388},
    {0x0397, 0x0301, 0x0389},
    {0x0399, 0x0301, 0x038A},
    {0x0399, 0x0308, 0x03AA},
    {0x039F, 0x0301, 0x038C},
    {0x03A5, 0x0301, 0x038E},
    {0x03A5, 0x0308, 0x03AB},
    {0x03A9, 0x0301, 0x038F},
    {0x03B1, 0x0301, 0x03AC},
    {0x03B5, 0x0301, 0x03AD},
    {0x03B7, 0x0301, 0x03AE},
    {0x03B9, 0x0301, 0x03AF},
    {0x03B9, 0x0308, 0x03CA},
    {0x03BF, 0x0301, 0x03CC},
    {0x03C5, 0x0301, 0x03CD},
    {0x03C5, 0x0308, 0x03CB},
    {0x03C9, 0x0301, 0x03CE},
    {0x03CA, 0x0301, 0x0390},
    {0x03CB, 0x0301, 0x03B0},
    {0x03D2, 0x0301, 0x03D3},
    {0x03D2, 0x0308, 0x03D4},
    {0x0406, 0x0308, 0x0407},
    {0x0410, 0x0306, 0x04D0},
    {0x0410, 0x0308, 0x04D2},
    {0x0413, 0x0301, 0x0403},
    {0x0415, 0x0300, 0x0400},
    {0x0415, 0x0306, 0x04D6},
    {0x0415, 0x0308, 0x0401},
    {0x0416, 0x0306, 0x04C1},
    {0x0416, 0x0308, 0x04DC},
    {0x0417, 0x0308, 0x04DE},
    {0x0418, 0x0300, 0x040D},
    {0x0418, 0x0304, 0x04E2},
    {0x0418, 0x0306, 0x0419},
    {0x0418, 0x0308, 0x04E4},
    {0x041A, 0x0301, 0x040C},
    {0x041E, 0x0308, 0x04E6},
    {0x0423, 0x0304, 0x04EE},
    {0x0423, 0x0306, 0x040E},
    {0x0423, 0x0308, 0x04F0},
    {0x0423, 0x030B, 0x04F2},
    {0x0427, 0x0308, 0x04F4},
    {0x042B, 0x0308, 0x04F8},
    {0x042D, 0x0308, 0x04EC},
    {0x0430, 0x0306, 0x04D1},
    {0x0430, 0x0308, 0x04D3},
    {0x0433, 0x0301, 0x0453},
    {0x0435, 0x0300, 0x0450},
    {0x0435, 0x0306, 0x04D7},
    {0x0435, 0x0308, 0x0451},
    {0x0436, 0x0306, 0x04C2},
    {0x0436, 0x0308, 0x04DD},
    {0x0437, 0x0308, 0x04DF},
    {0x0438, 0x0300, 0x045D},
    {0x0438, 0x0304, 0x04E3},
    {0x0438, 0x0306, 0x0439},
    {0x0438, 0x0308, 0x04E5},
    {0x043A, 0x0301, 0x045C},
    {0x043E, 0x0308, 0x04E7},
    {0x0443, 0x0304, 0x04EF},
    {0x0443, 0x0306, 0x045E},
    {0x0443, 0x0308, 0x04F1},
    {0x0443, 0x030B, 0x04F3},
    {0x0447, 0x0308, 0x04F5},
    {0x044B, 0x0308, 0x04F9},
    {0x044D, 0x0308, 0x04ED},
    {0x0456, 0x0308, 0x0457},
    {0x0474, 0x030F, 0x0476},
    {0x0475, 0x030F, 0x0477},
    {0x04D8, 0x0308, 0x04DA},
    {0x04D9, 0x0308, 0x04DB},
    {0x04E8, 0x0308, 0x04EA},
    {0x04E9, 0x0308, 0x04EB},
    {0x0627, 0x0653, 0x0622},
    {0x0627, 0x0654, 0x0623},
    {0x0627, 0x0655, 0x0625},
    {0x0648, 0x0654, 0x0624},
    {0x064A, 0x0654, 0x0626},
    {0x06C1, 0x0654, 0x06C2},
    {0x06D2, 0x0654, 0x06D3},
    {0x06D5, 0x0654, 0x06C0},
    {0x0928, 0x093C, 0x0929},
    {0x0930, 0x093C, 0x0931},
    {0x0933, 0x093C, 0x0934},
    {0x09C7, 0x09BE, 0x09CB},
    {0x09C7, 0x09D7, 0x09CC},
    {0x0B47, 0x0B3E, 0x0B4B},
    {0x0B47, 0x0B56, 0x0B48},
    {0x0B47, 0x0B57, 0x0B4C},
    {0x0B92, 0x0BD7, 0x0B94},
    {0x0BC6, 0x0BBE, 0x0BCA},
    {0x0BC6, 0x0BD7, 0x0BCC},
    {0x0BC7, 0x0BBE, 0x0BCB},
    {0x0C46, 0x0C56, 0x0C48},
    {0x0CBF, 0x0CD5, 0x0CC0},
    {0x0CC6, 0x0CC2, 0x0CCA},
    {0x0CC6, 0x0CD5, 0x0CC7},
    {0x0CC6, 0x0CD6, 0x0CC8},
    {0x0CCA, 0x0CD5, 0x0CCB},
    {0x0D46, 0x0D3E, 0x0D4A},
    {0x0D46, 0x0D57, 0x0D4C},
    {0x0D47, 0x0D3E, 0x0D4B},
    {0x0DD9, 0x0DCA, 0x0DDA},
    {0x0DD9, 0x0DCF, 0x0DDC},
    {0x0DD9, 0x0DDF, 0x0DDE},
    {0x0DDC, 0x0DCA, 0x0DDD},
};

}  // namespace smtkit::unicode_data
