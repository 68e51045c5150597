"""
SAFE-QML Acceptance Benchmark
Runs the desk-scale acceptance suites and measures each one.

Features:
- Simulator oracle, gradient fidelity, gradient-norm preservation, RG = AUC,
  parameter identity and the desk-scale end-to-end experiment
- Measures wall time and peak memory for each suite
- Prints prettytable summaries and exports JSON + text reports
"""

import argparse
import json
import sys
import time
import tracemalloc
from datetime import datetime
from functools import wraps
from pathlib import Path
from typing import Callable, Dict, List, Optional

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

try:
    import numpy as np
    import pandas as pd
    from prettytable import PrettyTable
except ImportError as e:
    print(f"❌ Missing required package: {e}")
    print("Install with: uv add pandas prettytable numpy")
    sys.exit(1)

from src.base import ModelKind
from src.datasets import SyntheticSpec, generate_synthetic
from src.evaluation import run_experiment
from src.log.logger import get_logger
from src.metrics import ScorePair, rg_score
from src.models import TrainConfig, build_model, count_parameters, cross_entropy
from src.perturbations import CurveConfig
from src.quantum import CircuitLayout, RotationParams, StateVector, rotation_matrix, strongly_entangling_layer, unitary_vjp

# Setup logger
log = get_logger(__name__)

FD_STEP = 1e-5


class BenchmarkMetrics:
    """Container for benchmark metrics"""

    def __init__(self):
        self.execution_time: float = 0.0
        self.peak_memory_mb: float = 0.0
        self.current_memory_mb: float = 0.0
        self.checks: int = 0
        self.failures: int = 0
        self.success: bool = False
        self.error: Optional[str] = None
        self.suite_name: str = ""
        self.budget_s: Optional[float] = None

    @property
    def within_budget(self) -> bool:
        return self.budget_s is None or self.execution_time <= self.budget_s

    def to_dict(self) -> Dict:
        """Convert metrics to dictionary"""
        return {
            'execution_time': self.execution_time,
            'peak_memory_mb': self.peak_memory_mb,
            'current_memory_mb': self.current_memory_mb,
            'checks': self.checks,
            'failures': self.failures,
            'success': self.success,
            'error': self.error,
            'suite_name': self.suite_name,
            'budget_s': self.budget_s,
            'within_budget': self.within_budget,
        }


def benchmark_decorator(func):
    """
    Decorator to automatically track execution time and memory usage.

    Usage:
        @benchmark_decorator
        def suite_rg_auc(rng):
            return {'checks': 200, 'failures': 0}
    """
    @wraps(func)
    def wrapper(*args, **kwargs):
        metrics = BenchmarkMetrics()

        # Start memory tracking
        tracemalloc.start()
        start_time = time.perf_counter()

        try:
            result = func(*args, **kwargs)
            metrics.checks = result['checks']
            metrics.failures = result['failures']
            metrics.success = result['failures'] == 0
        except Exception as e:
            metrics.error = f"{type(e).__name__}: {e}"
            metrics.success = False
            result = None
            log.error(f"❌ Benchmark error in {func.__name__}: {e}")
        finally:
            metrics.execution_time = time.perf_counter() - start_time
            current, peak = tracemalloc.get_traced_memory()
            metrics.current_memory_mb = current / 1024 / 1024
            metrics.peak_memory_mb = peak / 1024 / 1024
            tracemalloc.stop()

        return result, metrics

    return wrapper


# --- oracles ----------------------------------------------------------------

def _dense_layer(angles: np.ndarray, n: int) -> np.ndarray:
    """Explicit Kronecker-product unitary of one strongly-entangling layer"""
    dim = 2 ** n
    unitary = np.eye(dim, dtype=np.complex128)
    for q in range(n):
        factor = np.array([[1.0 + 0j]])
        for j in range(n):
            factor = np.kron(factor, rotation_matrix(*angles[q]) if j == q else np.eye(2))
        unitary = factor @ unitary
    if n > 1:
        for control in range(n):
            target = (control + 1) % n
            cnot = np.zeros((dim, dim), dtype=np.complex128)
            for k in range(dim):
                flip = (k >> (n - 1 - control)) & 1
                cnot[k ^ (1 << (n - 1 - target)) if flip else k, k] = 1.0
            unitary = cnot @ unitary
    return unitary


def _random_state(rng: np.random.Generator, n: int) -> np.ndarray:
    amplitudes = rng.standard_normal(2 ** n) + 1j * rng.standard_normal(2 ** n)
    return amplitudes / np.linalg.norm(amplitudes)


def _loss(model, features: np.ndarray, label: int) -> float:
    return cross_entropy(model.forward(features)[0], label)


def _pairwise_auc(labels: np.ndarray, scores: np.ndarray) -> float:
    positives, negatives = scores[labels == 1], scores[labels == 0]
    wins = (positives[:, None] > negatives[None, :]).sum()
    ties = (positives[:, None] == negatives[None, :]).sum()
    return (wins + 0.5 * ties) / (positives.size * negatives.size)


# --- suites -----------------------------------------------------------------

@benchmark_decorator
def suite_simulator_oracle(rng: np.random.Generator, instances: int = 500) -> Dict:
    """Layer vs dense unitary within 1e-12, norm and isometry within 1e-10"""
    failures = checks = 0
    for n in (1, 2, 3, 4):
        layout = CircuitLayout(n)
        for _ in range(instances):
            params = RotationParams(rng.uniform(0, 2 * np.pi, (n, 3)))
            psi, phi = _random_state(rng, n), _random_state(rng, n)
            out_psi = strongly_entangling_layer(StateVector(n, psi), params, layout).amplitudes
            out_phi = strongly_entangling_layer(StateVector(n, phi), params, layout).amplitudes
            ok = np.max(np.abs(out_psi - _dense_layer(params.angles, n) @ psi)) < 1e-12
            ok &= abs(np.linalg.norm(out_psi) - 1.0) < 1e-10
            ok &= abs(np.linalg.norm(out_psi - out_phi) - np.linalg.norm(psi - phi)) < 1e-10
            checks += 1
            failures += int(not ok)
    return {'checks': checks, 'failures': failures}


@benchmark_decorator
def suite_gradient_fidelity(rng: np.random.Generator, models: int = 100) -> Dict:
    """Tiny hybrid models: every gradient within relative error 1e-4 of central differences"""
    failures = 0
    worst = 0.0
    for _ in range(models):
        d = int(rng.integers(2, 9))
        classes = int(rng.integers(2, 4))
        model = build_model(ModelKind.QML, d, classes, rng)
        x = rng.standard_normal(d)
        label = int(rng.integers(classes))
        grads, grad_input = model.backward(model.forward(x)[1], label)

        pairs = []
        for name, p in model.parameters().items():
            numeric = np.zeros_like(p)
            for idx in np.ndindex(p.shape):
                original = p[idx]
                p[idx] = original + FD_STEP
                up = _loss(model, x, label)
                p[idx] = original - FD_STEP
                down = _loss(model, x, label)
                p[idx] = original
                numeric[idx] = (up - down) / (2 * FD_STEP)
            pairs.append((grads[name], numeric))
        numeric_input = np.array([
            (_loss(model, x + FD_STEP * e, label) - _loss(model, x - FD_STEP * e, label)) / (2 * FD_STEP) for e in np.eye(d)
        ])
        pairs.append((grad_input, numeric_input))

        error = max(
            float(np.max(np.abs(a - b) / np.maximum(np.abs(a) + np.abs(b), 1e-4))) for a, b in pairs
        )
        worst = max(worst, error)
        failures += int(error >= 1e-4)
    log.info(f"📐 Worst relative gradient error: {worst:.2e}")
    return {'checks': models, 'failures': failures}


@benchmark_decorator
def suite_gradient_norm(rng: np.random.Generator, cotangents: int = 100) -> Dict:
    """Pulling a cotangent back through the circuit keeps its norm within 1e-10"""
    failures = 0
    for _ in range(cotangents):
        n = int(rng.integers(1, 5))
        params = RotationParams(rng.uniform(0, 2 * np.pi, (n, 3)))
        cotangent = rng.standard_normal(2 ** n) + 1j * rng.standard_normal(2 ** n)
        pulled = unitary_vjp(cotangent, params)
        failures += int(abs(np.linalg.norm(pulled) - np.linalg.norm(cotangent)) >= 1e-10)
    return {'checks': cotangents, 'failures': failures}


@benchmark_decorator
def suite_rg_auc(rng: np.random.Generator, instances: int = 200) -> Dict:
    """RG on a binary reference equals the brute-force pairwise AUC within 1e-12"""
    failures = 0
    for i in range(instances):
        n = int(rng.integers(2, 201))
        labels = rng.integers(0, 2, n)
        labels[0], labels[1] = 0, 1
        scores = rng.integers(0, 6, n).astype(np.float64) if i % 2 else rng.random(n)
        got = rg_score(ScorePair(labels.astype(np.float64), scores))
        failures += int(abs(got - _pairwise_auc(labels, scores)) >= 1e-12)
    return {'checks': instances, 'failures': failures}


@benchmark_decorator
def suite_parameter_identity(rng: np.random.Generator) -> Dict:
    """d=512, 3 classes: 262,713 QML and 264,195 MLP trainable scalars"""
    expected = {ModelKind.QML: 262_713, ModelKind.MLP: 264_195}
    failures = sum(int(count_parameters(build_model(kind, 512, 3, rng)) != count)
                   for kind, count in expected.items())
    return {'checks': len(expected), 'failures': failures}


@benchmark_decorator
def suite_desk_scale(rng: np.random.Generator) -> Dict:
    """Synthetic d=64 blobs, 5-fold CV: QML and MLP F1-macro >= 0.90, curves start at 1, areas in [0, 1]"""
    data = generate_synthetic(SyntheticSpec(n_samples=600, n_features=64, n_classes=3, separation=6.0, seed=7))
    report = run_experiment(data, list(ModelKind), TrainConfig(), CurveConfig(), seed=7, folds=5)
    checks = failures = 0
    for kind in ("qml", "mlp"):
        f1 = report.aggregates[kind]["f1_macro"]["mean"]
        log.info(f"📊 {kind}: F1-macro {f1:.4f}")
        checks += 1
        failures += int(f1 < 0.90)
    for result in report.results:
        for variant in ("noise", "fgsm", "rge"):
            checks += 1
            failures += int(result.curves[variant].scores[0] != 1.0)
        for metric in ("aurga", "aurgr_noise", "aurgr_fgsm", "aurge"):
            value = result.metrics[metric]
            checks += 1
            failures += int(value is not None and not 0.0 <= value <= 1.0)
    return {'checks': checks, 'failures': failures}


SUITES: Dict[str, Dict] = {
    'simulator_oracle': {'name': 'Simulator vs dense oracle', 'run': suite_simulator_oracle, 'budget_s': 10.0},
    'gradient_fidelity': {'name': 'Gradient fidelity', 'run': suite_gradient_fidelity, 'budget_s': 60.0},
    'gradient_norm': {'name': 'Gradient-norm preservation', 'run': suite_gradient_norm, 'budget_s': None},
    'rg_auc': {'name': 'RG = AUC', 'run': suite_rg_auc, 'budget_s': 5.0},
    'parameter_identity': {'name': 'Parameter identity', 'run': suite_parameter_identity, 'budget_s': None},
    'desk_scale': {'name': 'Desk-scale end-to-end', 'run': suite_desk_scale, 'budget_s': 300.0},
}


class SafeQmlBenchmark:
    """Main benchmark orchestrator"""

    def __init__(self, output_dir: str = "benchmark", seed: int = 0):
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(exist_ok=True)
        self.seed = seed
        self.results: List[Dict] = []
        self.timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")

    def run_benchmark(self, suites: Optional[List[str]] = None) -> List[Dict]:
        """
        Run the selected acceptance suites (default: all of them).

        Each suite gets its own generator seeded from the benchmark seed and
        its position, so suites can be run alone with the same inputs.
        """
        if suites is None:
            suites = list(SUITES)

        log.info("=" * 80)
        log.info("🚀 Starting SAFE-QML acceptance benchmark")
        log.info(f"📊 Suites: {len(suites)}, seed: {self.seed}")
        log.info("=" * 80)

        self.results = []
        for number, key in enumerate(suites, start=1):
            info = SUITES[key]
            log.info(f"[{number}/{len(suites)}] 🧪 {info['name']}...")
            rng = np.random.default_rng([self.seed, list(SUITES).index(key)])
            run: Callable = info['run']
            _, metrics = run(rng)
            metrics.suite_name = info['name']
            metrics.budget_s = info['budget_s']

            if metrics.success:
                log.info(f"✅ {info['name']}: {metrics.checks} checks passed in {metrics.execution_time:.2f}s, "
                         f"peak memory {metrics.peak_memory_mb:.2f}MB")
            else:
                log.warning(f"❌ {info['name']}: {metrics.failures}/{metrics.checks} failed"
                            f"{' (' + metrics.error + ')' if metrics.error else ''}")
            if not metrics.within_budget:
                log.warning(f"⚠️ {info['name']} took {metrics.execution_time:.1f}s, budget {metrics.budget_s:.0f}s")

            self.results.append({'suite': key, **metrics.to_dict()})

        log.info("=" * 80)
        log.info(f"✅ Benchmark completed! Suites run: {len(self.results)}")
        log.info("=" * 80)
        return self.results

    def generate_summary_table(self) -> Optional[PrettyTable]:
        """Pass/fail and totals over all suites"""
        if not self.results:
            return None

        df = pd.DataFrame(self.results)
        table = PrettyTable()
        table.field_names = ["Suites", "Passed", "Within Budget", "Total Checks", "Total Failures", "Total Time (s)"]
        table.add_row([
            len(df),
            f"{int(df['success'].sum())}/{len(df)}",
            f"{int(df['within_budget'].sum())}/{len(df)}",
            int(df['checks'].sum()),
            int(df['failures'].sum()),
            f"{df['execution_time'].sum():.2f}",
        ])
        return table

    def generate_detailed_table(self) -> Optional[PrettyTable]:
        """One row per suite"""
        if not self.results:
            return None

        table = PrettyTable()
        table.field_names = ["Suite", "Result", "Checks", "Failures", "Time (s)", "Budget (s)", "Peak Memory (MB)"]
        for result in self.results:
            table.add_row([
                result['suite_name'],
                "✅" if result['success'] else "❌",
                result['checks'],
                result['failures'],
                f"{result['execution_time']:.2f}",
                f"{result['budget_s']:.0f}" if result['budget_s'] is not None else "-",
                f"{result['peak_memory_mb']:.2f}",
            ])
        return table

    def export_results(self):
        """Export results as JSON data and a text report"""
        if not self.results:
            log.warning("No results to export")
            return

        log.info("📊 Exporting results...")

        json_file = self.output_dir / f"benchmark_data_{self.timestamp}.json"
        with open(json_file, 'w', encoding='utf-8') as f:
            json.dump({'seed': self.seed, 'results': self.results}, f, indent=2)
        log.info(f"✅ JSON data: {json_file}")

        txt_file = self.output_dir / f"benchmark_results_{self.timestamp}.txt"
        with open(txt_file, 'w', encoding='utf-8') as f:
            f.write("=" * 80 + "\n")
            f.write("SAFE-QML ACCEPTANCE BENCHMARK RESULTS\n")
            f.write(f"Generated: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}\n")
            f.write("=" * 80 + "\n\n")
            f.write("SUMMARY\n")
            f.write("-" * 80 + "\n")
            f.write(str(self.generate_summary_table()) + "\n\n")
            f.write("SUITES\n")
            f.write("-" * 80 + "\n")
            f.write(str(self.generate_detailed_table()) + "\n")
        log.info(f"✅ Text report: {txt_file}")

        log.info(f"🎉 All results exported to: {self.output_dir}")


def main():
    """Main execution function"""
    parser = argparse.ArgumentParser(description="SAFE-QML acceptance benchmark")
    parser.add_argument("--suites", help=f"comma-separated subset of {','.join(SUITES)}")
    parser.add_argument("--quick", action="store_true", help="skip the desk-scale end-to-end suite")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    suites = args.suites.split(",") if args.suites else list(SUITES)
    unknown = [s for s in suites if s not in SUITES]
    if unknown:
        parser.error(f"unknown suites: {unknown}")
    if args.quick:
        suites = [s for s in suites if s != 'desk_scale']

    print("=" * 80)
    print("🚀 SAFE-QML Acceptance Benchmark")
    print("=" * 80)

    project_root = Path(__file__).parent.parent
    benchmark = SafeQmlBenchmark(output_dir=str(project_root / "benchmark"), seed=args.seed)
    benchmark.run_benchmark(suites)

    print("\n" + "=" * 80)
    print("📊 SUMMARY")
    print("=" * 80)
    print(benchmark.generate_summary_table())

    print("\n" + "=" * 80)
    print("📋 SUITES")
    print("=" * 80)
    print(benchmark.generate_detailed_table())

    benchmark.export_results()

    failed = [r['suite'] for r in benchmark.results if not r['success']]
    print("\n" + "=" * 80)
    print("✅ All suites passed!" if not failed else f"❌ Failed suites: {', '.join(failed)}")
    print("=" * 80)
    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
