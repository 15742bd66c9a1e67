from rational_base_kit.ui.cli import run

if __name__ == "__main__":
    run()
