#!/usr/bin/env python3
"""
Timing of the Barnes quadrature and of the series summations
at increasing precision
"""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))
from wzbarnes import Precision, eval_integral, choose_contour, weighted_series_eval
from wzbarnes.paperlib import ej1, ej2, for5s1, zhi_series


class Benchmark:
    """Base benchmark class"""

    def __init__(self, name: str, digits: int):
        self.name = name
        self.prec = Precision(digits)

    def run(self, iterations: int = 1):
        start = time.perf_counter()
        for _ in range(iterations):
            self.execute()
        elapsed = time.perf_counter() - start
        return elapsed / iterations

    def execute(self):
        raise NotImplementedError


class QuadratureBenchmark(Benchmark):
    def __init__(self, name: str, integrand, digits: int):
        super().__init__(f"{name} quadrature", digits)
        self.integrand = integrand
        self.nodes = 0

    def execute(self):
        result = eval_integral(self.integrand, choose_contour(self.integrand, self.prec), self.prec)
        self.nodes = result.nodes_used


class SeriesBenchmark(Benchmark):
    def __init__(self, name: str, series, digits: int):
        super().__init__(f"{name} series", digits)
        self.series = series

    def execute(self):
        weighted_series_eval(self.series, self.prec)


def main():
    print("Barnes quadrature and series timing")
    print("=" * 60)
    for digits in (20, 30, 50, 80):
        print(f"\n{digits} digits:")
        benchmarks = [
            QuadratureBenchmark("for5s1", for5s1(), digits),
            QuadratureBenchmark("ej1", ej1(), digits),
            QuadratureBenchmark("ej2", ej2(), digits),
            SeriesBenchmark("zhi", zhi_series(), digits),
        ]
        for bench in benchmarks:
            elapsed = bench.run()
            nodes = f"  ({bench.nodes} nodes)" if isinstance(bench, QuadratureBenchmark) else ""
            print(f"  {bench.name:<22} {elapsed * 1000:10.1f} ms{nodes}")


if __name__ == "__main__":
    main()
