"""Glue tori into star sums and classify the closure of their absolute periods."""
from flatsurgery.cli import _trichotomy_specs
from flatsurgery.homology import per_closure_class
from flatsurgery.surgery import star_connected_sum


def main():
    for spec in _trichotomy_specs():
        s = star_connected_sum(spec).surface
        cl, area, _ = per_closure_class(s)
        lat = ", ".join(f"({a}, {b})" for a, b in spec.lattices)
        print(f"{s!r}")
        print(f"  lattices: {lat}")
        print(f"  closure: {cl.name}, area {area}")


if __name__ == "__main__":
    main()
