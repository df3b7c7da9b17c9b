//! Reference frequency table: alias, expected conditional frequency, count,
//! observed frequency, ratio, all as printed to five decimals.

pub const TOTAL: u64 = 461925;

pub const ROWS: [(&str, f64, u64, f64, f64); 19] = [
    ("[243,2]", 0.00732, 3184, 0.00689, 0.94175),
    ("[243,3]", 0.04392, 19298, 0.04178, 0.95131),
    ("[243,4]", 0.08783, 40968, 0.08869, 1.00977),
    ("[243,5]", 0.17566, 83353, 0.18045, 1.02724),
    ("[243,6]", 0.08783, 40125, 0.08686, 0.98899),
    ("[243,7]", 0.08783, 41398, 0.08962, 1.02037),
    ("[243,8]", 0.08783, 40807, 0.08834, 1.00580),
    ("[243,9]", 0.02196, 10426, 0.02257, 1.02791),
    ("[243,13]", 0.02928, 13288, 0.02877, 0.98256),
    ("[243,14]", 0.02928, 13705, 0.02967, 1.01340),
    ("[243,15]", 0.02928, 13474, 0.02917, 0.99632),
    ("[243,17]", 0.08783, 39425, 0.08535, 0.97174),
    ("[243,18]", 0.17566, 81494, 0.17642, 1.00433),
    ("[729,9]", 0.00488, 1979, 0.00428, 0.87801),
    ("[729,10]", 0.01464, 6555, 0.01419, 0.96940),
    ("[729,11]", 0.01464, 6172, 0.01336, 0.91276),
    ("[729,12]", 0.00976, 4299, 0.00931, 0.95365),
    ("[729,26]", 0.00488, 1929, 0.00418, 0.85582),
    ("[2187,33]", 0.00015, 46, 0.00010, 0.65307),
];
