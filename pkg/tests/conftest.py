import pytest


@pytest.fixture
def write_csv(tmp_path):
    def write(rows: list[str], name: str = "messages.csv") -> str:
        path = tmp_path / name
        header = "vessel_id,timestamp_utc,lat,lon,sog_knots,ship_type"
        path.write_text("\n".join([header, *rows]) + "\n", encoding="utf-8")
        return str(path)

    return write
