// SPDX-License-Identifier: Apache-2.0
#pragma once

// Reference npy files captured from numpy's own np.save output.

// [[1.0, 2.0], [3.0, 4.0]] as little-endian float64, C order
inline constexpr unsigned char kNpyF8Ref[] = {147,78,85,77,80,89,1,0,118,0,123,39,100,101,115,99,114,39,58,32,39,60,102,56,39,44,32,39,102,111,114,116,114,97,110,95,111,114,100,101,114,39,58,32,70,97,108,115,101,44,32,39,115,104,97,112,101,39,58,32,40,50,44,32,50,41,44,32,125,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,10,0,0,0,0,0,0,240,63,0,0,0,0,0,0,0,64,0,0,0,0,0,0,8,64,0,0,0,0,0,0,16,64};

// arange(12).reshape(3, 4) / 7 as little-endian float32, C order
inline constexpr unsigned char kNpyF32Ref[] = {147,78,85,77,80,89,1,0,118,0,123,39,100,101,115,99,114,39,58,32,39,60,102,52,39,44,32,39,102,111,114,116,114,97,110,95,111,114,100,101,114,39,58,32,70,97,108,115,101,44,32,39,115,104,97,112,101,39,58,32,40,51,44,32,52,41,44,32,125,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,32,10,0,0,0,0,37,73,18,62,37,73,146,62,183,109,219,62,37,73,18,63,110,219,54,63,183,109,91,63,0,0,128,63,37,73,146,63,73,146,164,63,110,219,182,63,146,36,201,63};
