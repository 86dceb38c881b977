import asyncio
import json
import sys
from pathlib import Path

import click
from dotenv import load_dotenv
from loguru import logger
import numpy as np
from pydantic import ValidationError

import experiment_process
import file_services
import verification
from schemas import (
    EigenvalueRecord,
    EstimateRecord,
    ExperimentConfig,
    MathieuRecord,
    ScanRecord,
    parse_int_list,
    parse_omega_grid,
)
from services import exact_core
from services.convergence import estimate_next_eigenvalue_coefficient, optimal_order_scan, sset_omega
from services.derivation import compare_with_tables, derive as derive_coefficients
from services.errors import DhoError, InvalidInputError, VerificationFailureError
from services.mathieu import MathieuQuery, mathieu_characteristic
from services.reference_solver import reference_state, sector_eigenvalue, select_dimension
from services.wavefunction import assemble_eigenvector, continuum_value
from settings.log_level import configure_logging

load_dotenv()

configure_logging()


class IntListType(click.ParamType):
    name = "LIST"

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value
        try:
            return parse_int_list(value)
        except InvalidInputError as e:
            self.fail(str(e), param, ctx)


class OmegaGridType(click.ParamType):
    name = "START:STOP:POINTS"

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value
        try:
            return parse_omega_grid(value)
        except InvalidInputError as e:
            self.fail(str(e), param, ctx)


INT_LIST = IntListType()
OMEGA_GRID = OmegaGridType()


def emit(metadata: dict, records: list, fmt: str = "csv", out: Path | None = None, annotate: bool = False) -> None:
    if out is not None:
        asyncio.run(file_services.save_records_async(out, metadata, records, fmt, annotate=annotate))
        return
    click.echo(file_services.render(metadata, records, fmt, annotate=annotate), nl=False)


@click.group()
@click.pass_context
def cli(ctx: click.Context) -> None:
    """Дискретный гармонический осциллятор и характеристические значения Матьё при больших q."""
    ctx.obj = asyncio.run(file_services.load_settings_async())


@cli.command()
@click.option("--n", "n", type=click.IntRange(min=0), required=True)
@click.option("--order", type=click.IntRange(min=0), required=True)
@click.option("--omega", type=float, required=True)
@click.option("--x0", type=float, default=0.0, show_default=True)
@click.option("--method", type=click.Choice(["series", "matrix"]), default="series", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path))
@click.pass_obj
def eig(settings, n: int, order: int, omega: float, x0: float, method: str, fmt: str, out: Path | None) -> None:
    """Собственное значение уровня n: асимптотический ряд или матрица."""
    if method == "series":
        if x0 != 0:
            logger.debug(f"[n={n}] ряд не зависит от x0, расщепление экспоненциально мало")
        value = exact_core.eigenvalue_series_value(n, order, omega)
    else:
        j0 = select_dimension(omega, n, "tail", x0, settings.tail_epsilon, settings.tail_margin)
        value = sector_eigenvalue(n, omega, x0, j0)
    record = EigenvalueRecord(n=n, order=order, omega=omega, x0=x0, method=method, eigenvalue=value)
    emit({"command": "eig"}, [record], fmt, out)


@cli.command()
@click.option("--n", "n", type=click.IntRange(min=0), required=True)
@click.option("--order", type=click.IntRange(min=1), default=None, help="Порядок m; обязателен для asymptotic.")
@click.option("--omega", type=float, required=True)
@click.option("--x0", type=float, default=0.0, show_default=True)
@click.option("--j0", type=click.IntRange(min=0), default=None)
@click.option("--normalize", type=click.Choice(["euclidean", "lowest"]), default="euclidean", show_default=True)
@click.option("--method", type=click.Choice(["asymptotic", "matrix"]), default="asymptotic", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default=None, help="По умолчанию из суффикса --out, иначе csv.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path))
@click.pass_obj
def vec(
    settings,
    n: int,
    order: int | None,
    omega: float,
    x0: float,
    j0: int | None,
    normalize: str,
    method: str,
    fmt: str | None,
    out: Path | None,
) -> None:
    """Собственный вектор на сетке j = -j0..j0: асимптотический psi^(n,m) или точный из матрицы."""
    fmt = fmt or (file_services.format_from_path(out) if out is not None else "csv")
    if method == "asymptotic":
        if order is None:
            raise InvalidInputError("Для asymptotic нужен --order")
        wavefunction = assemble_eigenvector(n, order, omega, x0, j0, normalize)
        metadata, rows = wavefunction.metadata(), wavefunction.to_rows()
    else:
        if normalize != "euclidean":
            raise InvalidInputError("Точный вектор экспортируется только с евклидовой нормировкой")
        if j0 is None:
            j0 = select_dimension(omega, n, "tail", x0, settings.tail_epsilon, settings.tail_margin)
        pair = reference_state(n, omega, x0, j0)
        j0 = (len(pair.vector) - 1) // 2
        x = np.arange(-j0, j0 + 1) - x0
        values = pair.vector
        positive = np.nonzero(x > 0)[0]
        if positive.size and np.sign(values[positive[0]]) == -np.sign(continuum_value(n, omega, x[positive[0]])):
            values = -values
        metadata = {"n": n, "m": None, "omega": omega, "x0": x0, "j0": j0, "normalization": normalize}
        rows = [{"j": int(j), "x": float(xj), "psi": float(psi)} for j, xj, psi in zip(range(-j0, j0 + 1), x, values)]
    emit({**metadata, "method": method}, rows, fmt, out, annotate=True)


@cli.command()
@click.option("--order", type=click.IntRange(min=0), required=True)
@click.option("--q", "q", type=float, required=True)
@click.option("--nu", type=float, default=None)
@click.option("--family", type=click.Choice(["a", "b"]), default="a", show_default=True)
@click.option("--method", type=click.Choice(["asymptotic", "matrix"]), default="matrix", show_default=True)
def mathieu(order: int, q: float, nu: float | None, family: str, method: str) -> None:
    """Характеристическое значение a_r(q) или b_r(q)."""
    query = MathieuQuery(order=order, q=q, nu=nu, family=family)
    value = mathieu_characteristic(query, method)
    emit({"command": "mathieu"}, [MathieuRecord(family=family, order=order, q=q, nu=nu, method=method, value=value)])


@cli.command()
@click.option("--n", "n_values", type=INT_LIST, required=True)
@click.option("--orders", type=INT_LIST, required=True)
@click.option("--omega-grid", "omegas", type=OMEGA_GRID, required=True)
@click.option("--x0", type=float, default=0.0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.pass_obj
def converge(settings, n_values, orders, omegas, x0: float, out: Path) -> None:
    """Ошибка по норме ||psi^(m) - psi_exact|| на сетке omega, наклоны и префакторы."""
    config = ExperimentConfig(
        n_values=n_values,
        orders=orders,
        omegas=omegas,
        x0=x0,
        out=out,
        format=file_services.format_from_path(out),
        settings=settings,
    )
    records = experiment_process.convergence_experiment(config)
    metadata = {
        "command": "converge",
        "n": list(config.n_values),
        "orders": list(config.orders),
        "omegas": list(config.omegas),
        "x0": config.x0,
        "precision_floor": settings.precision_floor,
    }
    emit(metadata, records, config.format, out)


@cli.command()
@click.option("--n", "n_values", type=INT_LIST, required=True)
@click.option("--order", type=click.IntRange(min=1), required=True)
@click.option("--omega-grid", "omegas", type=OMEGA_GRID, required=True)
@click.option("--x0", type=float, default=0.0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path))
def ortho(n_values, order: int, omegas, x0: float, out: Path | None) -> None:
    """Максимальное перекрытие <psi_n, psi_n'> и скорость его убывания."""
    records = experiment_process.orthonormality_experiment(n_values, order, omegas, x0)
    fmt = file_services.format_from_path(out) if out else "csv"
    emit({"command": "ortho", "n": list(n_values), "order": order}, records, fmt, out)


@cli.command()
@click.option("--n", "n", type=click.IntRange(min=0), required=True)
@click.option("--omega", type=float, required=True)
@click.option("--m-max", type=click.IntRange(min=0), default=16, show_default=True)
@click.option("--x0", type=float, default=0.0, show_default=True)
def scan(n: int, omega: float, m_max: int, x0: float) -> None:
    """Delta lambda по порядкам ряда и оптимальный порядок."""
    result = optimal_order_scan(n, omega, m_max, x0)
    records = [
        ScanRecord(n=n, omega=omega, m=m, delta=delta, is_argmin=m == result.argmin)
        for m, delta in enumerate(result.deltas)
    ]
    emit({"command": "scan"}, records)


@cli.command()
@click.option("--n", "n", type=click.IntRange(min=0), required=True)
@click.option("--m-known", type=click.IntRange(min=0), required=True)
@click.option("--omega0", type=float, required=True)
@click.option("--halvings", type=click.IntRange(min=1), default=None)
@click.pass_obj
def estimate(settings, n: int, m_known: int, omega0: float, halvings: int | None) -> None:
    """Оценка lambda^(m+1) по невязкам собственного значения."""
    result = estimate_next_eigenvalue_coefficient(
        n,
        m_known,
        omega0,
        halvings or settings.halving_steps,
        spread=settings.ill_conditioned_spread,
    )
    record = EstimateRecord(
        n=n, order=result.order, omega0=omega0, estimate=result.estimate, ill_conditioned=result.ill_conditioned
    )
    emit({"command": "estimate"}, [record])


@cli.command()
@click.option("--n", "n", type=click.IntRange(min=0), required=True)
@click.option("--max-order", type=click.IntRange(min=1), required=True)
@click.option("--certificate", type=click.Path(dir_okay=False, path_type=Path))
def derive(n: int, max_order: int, certificate: Path | None) -> None:
    """Вывод alpha, beta, lambda по порядкам в точной арифметике."""
    state = derive_coefficients(n, max_order)
    if certificate is not None:
        asyncio.run(file_services.save_file_async(certificate, state.certificate(), base=Path.cwd()))
    rows = [
        {"m": m, **file_services.rational_to_json(value), "value": float(value)}
        for m, value in sorted(state.eigenvalues().items())
    ]
    emit({"command": "derive", "n": n}, rows)
    mismatches = compare_with_tables(state)
    if mismatches:
        raise VerificationFailureError(
            f"[n={n}] {len(mismatches)} выведенных коэффициентов расходятся с таблицами, первый {mismatches[0].name}",
            failures=mismatches,
        )


@cli.command()
@click.option("--suite", type=click.Choice(["identities", "residuals", "tables", "all"]), required=True)
def verify(suite: str) -> None:
    """Самопроверки: таблицы, рекурсии, порядок невязки."""
    results = verification.run_suite(suite)
    emit({"command": "verify"}, [{"suite": r.suite, "check": r.name, "passed": r.passed} for r in results])


@cli.command()
@click.option("--ec", type=float, required=True)
@click.option("--ej", type=float, required=True)
def sset(ec: float, ej: float) -> None:
    """omega = sqrt(2 E_C / E_J) для сверхпроводящего одноэлектронного транзистора."""
    omega = sset_omega(ec, ej)
    emit({"command": "sset"}, [{"ec": ec, "ej": ej, "omega": omega, "q": 4.0 / omega**2}])


@cli.command("dump-tables")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path))
def dump_tables(out: Path | None) -> None:
    """Все таблицы коэффициентов в JSON (числитель/знаменатель строками)."""
    tables = exact_core.dump_tables()
    if out is None:
        click.echo(json.dumps(tables, ensure_ascii=False, indent=4))
        return
    asyncio.run(file_services.save_file_async(out, tables, base=Path.cwd()))


def main(argv: list[str] | None = None) -> int:
    """Запуск CLI с кодами выхода: 0 успех, 1 ввод, 2 вне таблиц, 3 численный сбой, 4 проверка."""
    try:
        result = cli.main(args=argv, prog_name="dho", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return 1
    except click.Abort:
        logger.info("Прервано.")
        return 1
    except ValidationError as e:
        logger.error(f"Некорректная конфигурация: {e}")
        return 1
    except DhoError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logger.info("Приложение остановлено.")
