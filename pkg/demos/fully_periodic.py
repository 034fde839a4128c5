"""Split zeros of a genus-g star sum until every horizontal saddle connection is a loop."""
import sys

from flatsurgery.cyl import cylinder_digraph, horizontal_decomposition
from flatsurgery.scenarios import horizontal_star_spec
from flatsurgery.surgery import make_fully_periodic, star_connected_sum


def main(g=3):
    s = star_connected_sum(horizontal_star_spec(g)).surface
    before = horizontal_decomposition(s)
    print(f"star sum of {g} unit tori: {len(before.cylinders)} horizontal cylinders")
    out = make_fully_periodic(s)
    d = horizontal_decomposition(out)
    dg = cylinder_digraph(d)
    print(f"after splitting: {len(d.cylinders)} cylinders, {len(dg.edges)} saddle connections, "
          f"loop space of dimension {dg.loop_dim}")
    for c in d.cylinders:
        print(f"  C{c.id}: height {c.height}, circumference {c.width}")
    print(dg.to_dot(d))


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 3)
