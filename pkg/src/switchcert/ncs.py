"""Built-in demo: a networked control system with bounded packet loss.

A discrete-time plant is stabilized through a lossy channel.  When the
control packet arrives the closed loop applies A + B K (label 1); when it
is lost the plant runs open loop (label 2).  The channel never drops more
than two packets in a row, which a three-node graph encodes: node a after
a delivery, nodes b and c after one and two consecutive losses.
"""

from __future__ import annotations

import numpy as np

from .graphs import Edge, LabeledGraph
from .systems import SwitchedSystem, switched_system

A_PLANT = np.array([[0.45, 1.08], [0.36, 0.09]])
B_INPUT = np.array([[0.0], [1.0]])
K_GAIN = np.array([[-0.42, -0.36]])


def ncs_example() -> SwitchedSystem:
    closed = A_PLANT + B_INPUT @ K_GAIN
    graph = LabeledGraph(
        3,
        (
            Edge(0, 0, 1),  # a --delivered--> a
            Edge(0, 1, 2),  # a --lost--> b
            Edge(1, 0, 1),  # b --delivered--> a
            Edge(1, 2, 2),  # b --lost--> c
            Edge(2, 0, 1),  # c --delivered--> a (a third loss is not admissible)
        ),
    )
    return switched_system(graph, (closed, A_PLANT), node_names=("a", "b", "c"))
