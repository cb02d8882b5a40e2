from typing import Any, Dict, Optional, Sequence, Tuple


class CrithermException(Exception):
    def pretty_print_str(self):
        err = f"[bold][red]{type(self).__name__}: {str(self)}[/red][/bold]"
        return err

    def details(self) -> Dict[str, Any]:
        return {}

    def to_error_dict(self) -> Dict[str, Any]:
        return {"error": type(self).__name__, "message": str(self), "details": self.details()}


class BadConfigException(CrithermException):
    def __init__(self, message, key_path: Optional[str] = None):
        super().__init__(f"{key_path}: {message}" if key_path else message)
        self.key_path = key_path

    def details(self):
        return {"key_path": self.key_path}

    def pretty_print_str(self):
        err = f"[red][bold]:x: BadConfigException:[/bold] {str(self)}[/red]"
        if self.key_path:
            err += f"\n[bold][red]Please fix the value at [italic]{self.key_path}[/italic] in your config.[/red][/bold]"
        return err


class InvalidModelException(CrithermException):
    pass


class SizeCapExceededException(InvalidModelException):
    def __init__(self, message, size: int, cap: int):
        super().__init__(message)
        self.size = size
        self.cap = cap

    def details(self):
        return {"size": self.size, "cap": self.cap}

    def pretty_print_str(self):
        err = f"[red][bold]:x: SizeCapExceededException:[/bold] {str(self)}[/red]"
        err += "\n[bold][red]Raise the cap with --size-cap, CRITHERM_SIZE_CAP or `critherm config set`.[/red][/bold]"
        return err


class IncompatibleObservableException(CrithermException):
    pass


class InvalidTemperatureException(CrithermException):
    pass


class NonHermitianException(CrithermException):
    def __init__(self, message, deviation: float):
        super().__init__(message)
        self.deviation = deviation

    def details(self):
        return {"deviation": self.deviation}


class SpectrumConvergenceException(CrithermException):
    def __init__(self, message, shape: Tuple[int, ...], norm: float):
        super().__init__(message)
        self.shape = shape
        self.norm = norm

    def details(self):
        return {"shape": list(self.shape), "norm": self.norm}


class GridBoundaryException(CrithermException):
    def __init__(self, message, index: int, value: float):
        super().__init__(message)
        self.index = index
        self.value = value

    def details(self):
        return {"index": self.index, "value": self.value}

    def pretty_print_str(self):
        err = f"[red][bold]:x: GridBoundaryException:[/bold] {str(self)}[/red]"
        err += "\n[bold][red]The gap minimum sits on the edge of the grid, please widen it.[/red][/bold]"
        return err


class NonOverlappingCurvesException(CrithermException):
    def __init__(self, message, ranges: Sequence[Tuple[Any, float, float]]):
        super().__init__(message)
        self.ranges = list(ranges)

    def details(self):
        return {"ranges": [{"size": size, "x_min": lo, "x_max": hi} for size, lo, hi in self.ranges]}

    def pretty_print_str(self):
        err = f"[red][bold]:x: NonOverlappingCurvesException:[/bold] {str(self)}[/red]"
        for size, lo, hi in self.ranges:
            err += f"\n\t[red]size {size}: x in [{lo:.4g}, {hi:.4g}][/red]"
        return err


class MixedTemperatureRatioException(CrithermException):
    pass


class InvalidArgumentException(CrithermException):
    def __init__(self, message, param: str):
        super().__init__(f"{param}: {message}")
        self.param = param

    def details(self):
        return {"param": self.param}
