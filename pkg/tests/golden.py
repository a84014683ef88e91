"""Frozen golden vectors shared across the test suite.

The pair of reference events below (a "Guru" badge followed by a
"Good Answer" badge, 13 days 3:04:28 apart) anchors the conformance tests:
every strategy has a known-correct tokenization of them. The epoch values are
cross-checked against the stdlib datetime oracle in test_codec_calendar.
"""

import struct

# 2022-01-13T02:52:08Z and 2022-01-26T05:56:36Z
SO_EPOCH_1 = 1642042328
SO_EPOCH_2 = 1643176596
SO_DELTA_S = SO_EPOCH_2 - SO_EPOCH_1  # 1134268 s = 13 d 3:04:28

# the month-unit gap as stored by the reference corpus: float32 with these bits
SO_INTERVAL_BITS = 0x3EE00D93


def so_interval() -> float:
    return struct.unpack("<f", struct.pack("<I", SO_INTERVAL_BITS))[0]


SO_TYPES = ("Guru", "Good Answer")

NUMERIC_GOLDEN = ("0.000000", "0.437604")

BYTE_GOLDEN = (
    ("<|byte_000|>", "<|byte_000|>", "<|byte_000|>", "<|byte_000|>"),
    ("<|byte_147|>", "<|byte_013|>", "<|byte_224|>", "<|byte_062|>"),
)

CAL_ABS_SECOND_GOLDEN = (
    ("<|year_2022|>", "<|month_01|>", "<|day_13|>", "<|hour_02|>", "<|min_52|>", "<|sec_08|>"),
    ("<|year_2022|>", "<|month_01|>", "<|day_26|>", "<|hour_05|>", "<|min_56|>", "<|sec_36|>"),
)

CAL_ABS_DAY_GOLDEN = (
    ("<|year_2022|>", "<|month_01|>", "<|day_13|>"),
    ("<|year_2022|>", "<|month_01|>", "<|day_26|>"),
)

CAL_REL_SECOND_GOLDEN = (
    ("<|year_00|>", "<|month_00|>", "<|day_00|>", "<|hour_00|>", "<|min_00|>", "<|sec_00|>"),
    ("<|year_00|>", "<|month_00|>", "<|day_13|>", "<|hour_03|>", "<|min_04|>", "<|sec_28|>"),
)

CAL_REL_DAY_GOLDEN = (
    ("<|year_00|>", "<|month_00|>", "<|day_00|>"),
    ("<|year_00|>", "<|month_00|>", "<|day_13|>"),
)
