"""
Names and their normal forms
============================

"""

from qnet.formats import parse_raw_name
from qnet.names import corresponds, join, name, negate, normalize, overlaps

# a raw term is whatever you typed; normalize gives the canonical tree
raw = parse_raw_name("((3.l|8.rl)|-2).r")
print(raw, "->", normalize(raw))

# projecting the two halves of a sibling pair and joining them collapses back
print(normalize(parse_raw_name("(3.l|3.r)")))

u = name("(2|4)")
print("negated:", negate(u))
print("joined with 5:", join(u, name("5")))

# two sets of names correspond when they generate the same material
print(corresponds([name("2")], [name("2.l"), name("2.r")]))
print(corresponds([name("2")], [name("2.l")]))

# and they overlap when they share any of it
print(overlaps([name("(1|2)")], [name("2.r")]))
