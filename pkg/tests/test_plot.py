import matplotlib.pyplot as plt

from polytile.plot import plot_section


def test_plot_section(uniform_assembly, tmp_path):
    out = tmp_path / "plots" / "section.png"
    fig = plot_section(uniform_assembly, 10, out_path=str(out), title="level 2")
    assert out.exists()
    assert fig.axes[0].get_title() == "level 2"
    plt.close(fig)


def test_plot_section_without_saving(uniform_assembly):
    fig = plot_section(uniform_assembly, -3)
    assert fig.axes[0].get_title() == "Section at z = -3"
    plt.close(fig)
