"""Print move-by-move chains between tuples of areas and between gcd-one tuples."""
from fractions import Fraction

from flatsurgery.scenarios import chain_demos


def show(res):
    print(f"{res.kind}: ok={res.ok} {res.reason}")
    for t, (j, cert) in zip(res.chain, res.moves):
        print(f"  {tuple(str(x) for x in t)}  --keep entry {j} { {k: str(v) for k, v in cert.items()} }-->")
    if res.chain:
        print(f"  {tuple(str(x) for x in res.chain[-1])}")


if __name__ == "__main__":
    h = Fraction(1, 2)
    show(chain_demos("area", (1, 1, 1, 1), (h, h, 3 * h, 3 * h), eps=Fraction(1, 4)))
    show(chain_demos("gcd", (3, 3, 3, 5), (1, 1, 1, 1)))
    show(chain_demos("gcd", (3, 3, 3, 5), (1, 1, 1, 1), method="bfs"))
    show(chain_demos("gcd", (2, 4, 6, 8), (1, 1, 1, 1)))
