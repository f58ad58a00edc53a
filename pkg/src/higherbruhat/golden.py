"""
Frozen reference data for the bundled worked examples.

These are the expected outputs for the reproduce targets: the braid graph of
w = (1,7,2,0) in S̃_4 (fig1), the permanent poset (fig2), the consistent-set
poset (fig3), and the tagged packet graph (fig4) for w = (6,4,5,2,3,1) in
S_6, the six commutation classes of its 1228 3-admissible orders (table1),
and the rank-4 affine example (the affine4 target).  Words are stored with
letters as residues; classes as digit strings for brevity.
"""

FIG1_N = 4
FIG1_WINDOW = (1, 7, 2, 0)

# 10 reduced words in 5 commutation classes (letter 0 = s_0)
FIG1_CLASSES = [
    ["0121032"],
    ["0210232", "0212032", "2010232", "2012032"],
    ["0210323", "2010323"],
    ["2101232"],
    ["2101323", "2103123"],
]

# arcs between class indices in the list above
FIG1_ARCS = [(0, 1), (1, 2), (1, 3), (2, 4), (3, 4)]

FIG2_N = 6
FIG2_WINDOW = (6, 4, 5, 2, 3, 1)

FIG2_ELEMENTS = [
    "124", "125", "126", "134", "135", "136",
    "146", "156", "246", "256", "346", "356",
]

FIG2_COVERS = [
    ("124", "125"), ("134", "124"), ("134", "135"), ("135", "125"),
    ("136", "126"), ("156", "146"), ("246", "346"), ("256", "246"),
    ("256", "356"), ("356", "346"),
]

# consistent subsets of Inv_4(w) and the single-step-inclusion covers
FIG3_SETS = [
    [],
    ["1256"],
    ["1246", "1256"],
    ["1256", "1356"],
    ["1246", "1256", "1356"],
    ["1246", "1256", "1346", "1356"],
]

FIG3_COVERS = [(0, 1), (1, 2), (1, 3), (2, 4), (3, 4), (4, 5)]

FIG4_REVERSAL = ["1256", "1356"]

FIG4_ARCS = [
    ("124", "125", "quasi"), ("134", "124", "quasi"), ("134", "135", "quasi"),
    ("135", "125", "quasi"), ("136", "126", "quasi"), ("156", "146", "quasi"),
    ("246", "346", "quasi"), ("256", "246", "quasi"), ("256", "356", "quasi"),
    ("356", "346", "quasi"),
    ("256", "156", "reversal"), ("156", "126", "reversal"),
    ("126", "125", "reversal"), ("356", "156", "reversal"),
    ("156", "136", "reversal"), ("136", "135", "reversal"),
    ("124", "126", "complement"), ("126", "146", "complement"),
    ("146", "246", "complement"), ("134", "136", "complement"),
    ("136", "146", "complement"), ("146", "346", "complement"),
]

# representative 3-admissible orders, one per commutation class, with their
# reversal sets; the full class count is 1228
TABLE1_ORDERS = [
    ("134 124 135 136 125 126 156 256 146 246 356 346", []),
    ("134 256 135 136 156 356 124 126 146 246 346 125", ["1256"]),
    ("134 256 135 136 156 356 246 146 126 124 346 125", ["1246", "1256"]),
    ("134 256 356 156 136 135 124 126 146 246 346 125", ["1256", "1356"]),
    ("134 256 356 156 136 135 246 146 126 124 346 125",
     ["1246", "1256", "1356"]),
    ("256 246 356 156 346 146 136 134 126 124 135 125",
     ["1246", "1256", "1346", "1356"]),
]

COUNT_ADMISSIBLE = 1228
COUNT_CLASSES = 6

AFFINE4_N = 4
AFFINE4_WINDOW = (-3, -2, 8, 7)
AFFINE4_WORD = "232124134"
AFFINE4_ORDER = [
    (2, 3), (2, 4), (3, 4), (1, 4), (1, 3), (2, 8), (2, 7), (1, 8), (1, 7),
]
AFFINE4_REVERSAL = [(1, 3, 4), (2, 7, 8), (1, 7, 8)]
AFFINE4_BRAIDED_WORD = "323124134"
AFFINE4_FLIP_PACKET = (2, 3, 4)
