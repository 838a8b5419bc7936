"""Frozen known-good cases shared by several test modules."""

import numpy as np

# Two-server FCFS workload with hand-checkable assignments: the first two
# customers take servers 1 and 2, the third fits into server 1's gap, and
# the last three interleave.  Departures verified by hand recursion.
TWO_SERVER_ARRIVALS = np.array(
    [0.693512, 1.693399, 2.425550, 3.952405, 3.961906, 4.405492]
)
TWO_SERVER_SERVICES = np.array(
    [0.830158956, 0.817648174, 0.002675641, 0.667180991, 0.551920432, 1.069236762]
)
TWO_SERVER_DEPARTURES = np.array(
    [1.523671, 2.511047, 2.428226, 4.619586, 4.513827, 5.583063]
)
TWO_SERVER_ASSIGNMENTS = np.array([1, 2, 1, 1, 2, 2])

# Three customers on two servers where the first to arrive leaves last;
# the third must wait 1.097774 for the second server to free up.
CALL_ARRIVALS = np.array([0.7551818, 1.9368246, 2.0825313])
CALL_SERVICES = np.array([2.6669670, 1.2434810, 0.4197332])
CALL_DEPARTURES = np.array([3.422149, 3.180306, 3.600039])
CALL_THIRD_WAIT = 1.097774
