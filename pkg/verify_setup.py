#!/usr/bin/env python3
"""
Verification script to ensure the stpath setup is working correctly.
"""

import sys


def test_imports():
    """Test that all required modules can be imported."""
    try:
        import click  # noqa: F401
        import marshmallow  # noqa: F401
        import networkx  # noqa: F401
        from stpath import create_app  # noqa: F401
        from config import config  # noqa: F401
        print("✅ All imports successful")
        return True
    except ImportError as e:
        print(f"❌ Import error: {e}")
        return False


def test_app_creation():
    """Test that apps can be created with different configurations."""
    try:
        from stpath import create_app

        for config_name in ['development', 'testing', 'production']:
            app = create_app(config_name)
            assert app is not None
            print(f"✅ {config_name.capitalize()} app created successfully")

        return True
    except Exception as e:
        print(f"❌ App creation error: {e}")
        return False


def test_pipeline():
    """Test that a small generated instance solves with a valid certificate."""
    try:
        from stpath import create_app
        from stpath.services.instance_service import InstanceService

        app = create_app('testing')
        instance = InstanceService().gen_random_metric(6, 1, 'euclidean')
        result = app.bomd_service().run_bomd(instance)
        assert result.certificate.valid
        print(f"✅ Pipeline certified a tour of cost {result.tour.path_cost} (c(x*) = {result.certificate.lp_cost})")
        return True
    except Exception as e:
        print(f"❌ Pipeline error: {e}")
        return False


def main():
    """Run all verification tests."""
    print("🔍 Verifying stpath setup...")
    print("=" * 50)

    tests = [
        ("Import Tests", test_imports),
        ("App Creation Tests", test_app_creation),
        ("Pipeline Tests", test_pipeline)
    ]

    all_passed = True
    for test_name, test_func in tests:
        print(f"\n{test_name}:")
        if not test_func():
            all_passed = False

    print("\n" + "=" * 50)
    if all_passed:
        print("🎉 All verification tests passed!")
        print("\nNext steps:")
        print("1. Run 'python run.py --help' to list the commands")
        print("2. Run 'python -m pytest -m \"not slow\"' to run the fast tests")
    else:
        print("❌ Some tests failed. Please check the errors above.")
        sys.exit(1)


if __name__ == "__main__":
    main()
